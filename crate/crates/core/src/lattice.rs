//! Spin-1/2 chain Hamiltonians, Pauli observables and correlators.
//!
//! Conventions: `σ^z = diag(1, -1)` with `|0>` = spin up, and site 0 is the
//! most significant tensor factor, i.e. bit `L-1-i` of a basis index holds
//! the spin of site `i`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use thiserror::Error;

use crate::densemath::{ComplexMatrix, DenseError};
use crate::scalar::Real;
use crate::states::{DensityMatrix, PureState};

/// Dense diagonalization ceiling (dimension `2^14`).
pub const MAX_SITES: usize = 14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeError {
    #[error("{sites} sites requested, at most {max} supported by dense methods")]
    TooManySites { sites: usize, max: usize },
    #[error("a chain needs at least 2 sites, got {0}")]
    TooFewSites(usize),
    #[error("transverse field must be non-negative, got {0}")]
    NegativeField(f64),
    #[error("correlator needs two distinct sites, got {0} twice")]
    SameSite(usize),
    #[error("site {site} out of range for {sites} sites")]
    SiteOutOfRange { site: usize, sites: usize },
    #[error("state is not a chain of qubits (dims {0:?})")]
    NotQubitState(Vec<usize>),
    #[error(transparent)]
    Dense(#[from] DenseError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Heisenberg,
    TransverseIsing,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Heisenberg => "heisenberg",
            ModelKind::TransverseIsing => "transverse_ising",
        })
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "heisenberg" => Ok(ModelKind::Heisenberg),
            "transverse_ising" | "ising" | "tfim" => Ok(ModelKind::TransverseIsing),
            other => Err(format!("unknown model '{other}' (expected heisenberg | transverse_ising)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Boundary {
    #[default]
    Open,
    Periodic,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Open => "open",
            Boundary::Periodic => "periodic",
        })
    }
}

impl FromStr for Boundary {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "open" | "obc" => Ok(Boundary::Open),
            "periodic" | "pbc" => Ok(Boundary::Periodic),
            other => Err(format!("unknown boundary '{other}' (expected open | periodic)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            other => Err(format!("unknown axis '{other}'")),
        }
    }
}

/// Lattice model descriptor.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec<T> {
    pub kind: ModelKind,
    pub sites: usize,
    /// `J`, in energy units.
    pub coupling: T,
    /// `h`, transverse field (Ising only).
    pub field: T,
    pub boundary: Boundary,
}

impl<T: Real> ModelSpec<T> {
    /// `H = (J/2) Σ σ_i · σ_j` over nearest-neighbour bonds.
    pub fn heisenberg(sites: usize, coupling: T) -> Self {
        Self {
            kind: ModelKind::Heisenberg,
            sites,
            coupling,
            field: T::zero(),
            boundary: Boundary::Open,
        }
    }

    /// `H = -J Σ σ^z_i σ^z_j - h Σ σ^x_i`, critical at `h = J`.
    pub fn transverse_ising(sites: usize, coupling: T, field: T) -> Self {
        Self {
            kind: ModelKind::TransverseIsing,
            sites,
            coupling,
            field,
            boundary: Boundary::Open,
        }
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_sites(mut self, sites: usize) -> Self {
        self.sites = sites;
        self
    }

    pub fn validate(&self) -> Result<(), LatticeError> {
        if self.sites < 2 {
            return Err(LatticeError::TooFewSites(self.sites));
        }
        if self.sites > MAX_SITES {
            return Err(LatticeError::TooManySites {
                sites: self.sites,
                max: MAX_SITES,
            });
        }
        if self.kind == ModelKind::TransverseIsing && self.field < T::zero() {
            return Err(LatticeError::NegativeField(self.field.to_f64_lossy()));
        }
        Ok(())
    }

    /// Nearest-neighbour bonds. A periodic chain of two sites has a single
    /// bond.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let mut b: Vec<(usize, usize)> = (0..self.sites.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        if self.boundary == Boundary::Periodic && self.sites > 2 {
            b.push((self.sites - 1, 0));
        }
        b
    }

    /// Per-bond interaction `Σ_a c_a σ^a ⊗ σ^a` as `(axis, c_a)` pairs.
    pub fn bond_terms(&self) -> Vec<(Axis, T)> {
        match self.kind {
            ModelKind::Heisenberg => {
                let half = self.coupling * T::lit(0.5);
                Axis::ALL.iter().map(|&a| (a, half)).collect()
            }
            ModelKind::TransverseIsing => vec![(Axis::Z, -self.coupling)],
        }
    }

    /// Single-site terms `Σ_a c_a σ^a` as `(axis, c_a)` pairs.
    pub fn site_terms(&self) -> Vec<(Axis, T)> {
        match self.kind {
            ModelKind::Heisenberg => vec![],
            ModelKind::TransverseIsing if self.field != T::zero() => vec![(Axis::X, -self.field)],
            ModelKind::TransverseIsing => vec![],
        }
    }
}

/// 2x2 Pauli matrix.
pub fn pauli<T: Real>(axis: Axis) -> ComplexMatrix<T> {
    let z = Complex::new(T::zero(), T::zero());
    let o = Complex::new(T::one(), T::zero());
    let i = Complex::new(T::zero(), T::one());
    let data = match axis {
        Axis::X => vec![z, o, o, z],
        Axis::Y => vec![z, -i, i, z],
        Axis::Z => vec![o, z, z, -o],
    };
    ComplexMatrix::from_vec(2, 2, data).expect("2x2")
}

/// Action of `σ^axis` at bit position `pos` on basis index `k`:
/// returns `(k', phase)` with `σ|k> = phase |k'>`.
#[inline]
fn pauli_on_basis<T: Real>(axis: Axis, pos: usize, k: usize) -> (usize, Complex<T>) {
    let bit = (k >> pos) & 1;
    let one = T::one();
    match axis {
        Axis::X => (k ^ (1 << pos), Complex::new(one, T::zero())),
        // σ^y|0> = i|1>, σ^y|1> = -i|0>
        Axis::Y => (
            k ^ (1 << pos),
            Complex::new(T::zero(), if bit == 0 { one } else { -one }),
        ),
        Axis::Z => (k, Complex::new(if bit == 0 { one } else { -one }, T::zero())),
    }
}

/// Applies a product of Paulis on distinct sites to basis state `k`.
#[inline]
fn pauli_string_on_basis<T: Real>(ops: &[(usize, Axis)], sites: usize, k: usize) -> (usize, Complex<T>) {
    let mut idx = k;
    let mut phase = Complex::new(T::one(), T::zero());
    for &(site, axis) in ops.iter().rev() {
        let (n, p) = pauli_on_basis::<T>(axis, sites - 1 - site, idx);
        idx = n;
        phase *= p;
    }
    (idx, phase)
}

/// `H += coeff * Π σ^{a}_{site}` for Paulis on distinct sites.
pub fn add_pauli_string<T: Real>(h: &mut ComplexMatrix<T>, sites: usize, ops: &[(usize, Axis)], coeff: T) {
    let dim = 1usize << sites;
    debug_assert_eq!(h.rows(), dim);
    for k in 0..dim {
        let (k2, phase) = pauli_string_on_basis::<T>(ops, sites, k);
        h[(k2, k)] += phase * coeff;
    }
}

/// Pauli operator on one site of an `L`-site chain, embedded as
/// `I ⊗ … ⊗ σ^axis ⊗ … ⊗ I`.
#[derive(Clone, Debug)]
pub struct SiteOperator<T> {
    pub site: usize,
    pub axis: Axis,
    pub matrix: ComplexMatrix<T>,
}

impl<T: Real> SiteOperator<T> {
    pub fn new(sites: usize, site: usize, axis: Axis) -> Result<Self, LatticeError> {
        if sites > MAX_SITES {
            return Err(LatticeError::TooManySites { sites, max: MAX_SITES });
        }
        if site >= sites {
            return Err(LatticeError::SiteOutOfRange { site, sites });
        }
        let dim = 1usize << sites;
        let mut matrix = ComplexMatrix::zeros(dim, dim);
        add_pauli_string(&mut matrix, sites, &[(site, axis)], T::one());
        Ok(Self { site, axis, matrix })
    }
}

/// Dense Hamiltonian of a chain model.
pub fn build_hamiltonian<T: Real>(spec: &ModelSpec<T>) -> Result<ComplexMatrix<T>, LatticeError> {
    spec.validate()?;
    let l = spec.sites;
    let dim = 1usize << l;
    let mut h = ComplexMatrix::zeros(dim, dim);
    let bond_terms = spec.bond_terms();
    for (i, j) in spec.bonds() {
        for &(axis, c) in &bond_terms {
            if c != T::zero() {
                add_pauli_string(&mut h, l, &[(i, axis), (j, axis)], c);
            }
        }
    }
    for (axis, c) in spec.site_terms() {
        for i in 0..l {
            add_pauli_string(&mut h, l, &[(i, axis)], c);
        }
    }
    Ok(h)
}

/// States on which Pauli-string expectation values can be evaluated.
pub trait PauliExpectation<T: Real> {
    /// Number of qubits, or an error for non-qubit factors.
    fn qubit_count(&self) -> Result<usize, LatticeError>;

    /// `<Π σ^{a}_{site}>` for Paulis on distinct sites.
    fn pauli_expectation(&self, ops: &[(usize, Axis)]) -> Result<Complex<T>, LatticeError>;
}

fn qubits_of(dims: &[usize]) -> Result<usize, LatticeError> {
    if dims.iter().all(|&d| d == 2) {
        Ok(dims.len())
    } else {
        Err(LatticeError::NotQubitState(dims.to_vec()))
    }
}

fn check_ops(ops: &[(usize, Axis)], sites: usize) -> Result<(), LatticeError> {
    for (n, &(site, _)) in ops.iter().enumerate() {
        if site >= sites {
            return Err(LatticeError::SiteOutOfRange { site, sites });
        }
        if ops[..n].iter().any(|&(s, _)| s == site) {
            return Err(LatticeError::SameSite(site));
        }
    }
    Ok(())
}

impl<T: Real> PauliExpectation<T> for PureState<T> {
    fn qubit_count(&self) -> Result<usize, LatticeError> {
        qubits_of(self.dims())
    }

    fn pauli_expectation(&self, ops: &[(usize, Axis)]) -> Result<Complex<T>, LatticeError> {
        let l = self.qubit_count()?;
        check_ops(ops, l)?;
        let psi = self.amplitudes();
        let mut acc = Complex::new(T::zero(), T::zero());
        for (k, &a) in psi.iter().enumerate() {
            let (k2, phase) = pauli_string_on_basis::<T>(ops, l, k);
            acc += psi[k2].conj() * phase * a;
        }
        Ok(acc)
    }
}

impl<T: Real> PauliExpectation<T> for DensityMatrix<T> {
    fn qubit_count(&self) -> Result<usize, LatticeError> {
        qubits_of(self.dims())
    }

    fn pauli_expectation(&self, ops: &[(usize, Axis)]) -> Result<Complex<T>, LatticeError> {
        let l = self.qubit_count()?;
        check_ops(ops, l)?;
        let rho = self.matrix();
        // tr(ρP) = Σ_k ρ[k, k'] phase(k) with P|k> = phase(k)|k'>
        let mut acc = Complex::new(T::zero(), T::zero());
        for k in 0..rho.rows() {
            let (k2, phase) = pauli_string_on_basis::<T>(ops, l, k);
            acc += rho[(k, k2)] * phase;
        }
        Ok(acc)
    }
}

/// `<σ_i^α σ_j^β> - <σ_i^α><σ_j^β>` for distinct sites `i`, `j`.
pub fn connected_correlator<T: Real, S: PauliExpectation<T> + ?Sized>(
    state: &S,
    i: usize,
    alpha: Axis,
    j: usize,
    beta: Axis,
) -> Result<T, LatticeError> {
    if i == j {
        return Err(LatticeError::SameSite(i));
    }
    let joint = state.pauli_expectation(&[(i, alpha), (j, beta)])?;
    let si = state.pauli_expectation(&[(i, alpha)])?;
    let sj = state.pauli_expectation(&[(j, beta)])?;
    Ok(joint.re - si.re * sj.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densemath::{hermitian_eigvals, kron};
    use crate::scalar::c;
    use crate::states::{ground_state, qubit_dims, thermal_state};

    fn embed(sites: usize, ops: &[(usize, Axis)]) -> ComplexMatrix<f64> {
        let mut m = ComplexMatrix::identity(1);
        for s in 0..sites {
            let f = ops
                .iter()
                .find(|(site, _)| *site == s)
                .map_or_else(|| ComplexMatrix::identity(2), |&(_, a)| pauli(a));
            m = kron(&m, &f);
        }
        m
    }

    #[test]
    fn heisenberg_pair_ground_energy() {
        let h = build_hamiltonian(&ModelSpec::heisenberg(2, 1.0_f64)).unwrap();
        let ev = hermitian_eigvals(&h).unwrap();
        assert!((ev[0] + 1.5).abs() < 1e-14);
        assert!(ev[1..].iter().all(|&e| (e - 0.5).abs() < 1e-14));
    }

    #[test]
    fn zero_coupling_gives_zero_matrix() {
        let h = build_hamiltonian(&ModelSpec::heisenberg(2, 0.0)).unwrap();
        assert_eq!(h.max_abs(), 0.0);
    }

    #[test]
    fn decoupled_ising_spins() {
        let h = build_hamiltonian(&ModelSpec::transverse_ising(2, 0.0_f64, 1.0)).unwrap();
        let expected = &embed(2, &[(0, Axis::X)]).scaled(-1.0) - &embed(2, &[(1, Axis::X)]);
        assert!(h.max_abs_diff(&expected) < 1e-15);
        let ev = hermitian_eigvals(&h).unwrap();
        assert!((ev[0] + 2.0).abs() < 1e-14);
    }

    #[test]
    fn bit_construction_matches_kron_construction() {
        for spec in [
            ModelSpec::heisenberg(4, 1.3),
            ModelSpec::heisenberg(5, 0.7).with_boundary(Boundary::Periodic),
            ModelSpec::transverse_ising(4, 1.0, 0.6),
        ] {
            let h = build_hamiltonian(&spec).unwrap();
            let mut reference = ComplexMatrix::<f64>::zeros(h.rows(), h.cols());
            for (i, j) in spec.bonds() {
                for (a, c) in spec.bond_terms() {
                    reference = &reference + &embed(spec.sites, &[(i, a), (j, a)]).scaled(c);
                }
            }
            for (a, c) in spec.site_terms() {
                for i in 0..spec.sites {
                    reference = &reference + &embed(spec.sites, &[(i, a)]).scaled(c);
                }
            }
            assert!(h.max_abs_diff(&reference) < 1e-14);
        }
    }

    #[test]
    fn site_operator_is_hermitian_involution() {
        for axis in Axis::ALL {
            let op = SiteOperator::<f64>::new(3, 1, axis).unwrap();
            assert!(op.matrix.hermitian_deviation() < 1e-15);
            assert!(op.matrix.matmul(&op.matrix).max_abs_diff(&ComplexMatrix::identity(8)) < 1e-15);
            assert!(op.matrix.max_abs_diff(&embed(3, &[(1, axis)])) < 1e-15);
        }
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            build_hamiltonian(&ModelSpec::heisenberg(15, 1.0)),
            Err(LatticeError::TooManySites { .. })
        ));
        assert!(matches!(
            build_hamiltonian(&ModelSpec::transverse_ising(3, 1.0, -0.5)),
            Err(LatticeError::NegativeField(_))
        ));
        assert!(matches!(build_hamiltonian(&ModelSpec::heisenberg(1, 1.0)), Err(LatticeError::TooFewSites(1))));
    }

    #[test]
    fn heisenberg_conserves_total_sz() {
        let spec = ModelSpec::heisenberg(5, 1.0).with_boundary(Boundary::Periodic);
        let h = build_hamiltonian(&spec).unwrap();
        let mut sz = ComplexMatrix::<f64>::zeros(32, 32);
        for i in 0..5 {
            add_pauli_string(&mut sz, 5, &[(i, Axis::Z)], 1.0);
        }
        assert!(h.commutator(&sz).max_abs() <= 1e-10);
    }

    #[test]
    fn product_state_correlators_vanish() {
        let f = |t: f64, p: f64| vec![c((t / 2.0).cos(), 0.0), Complex::from_polar((t / 2.0).sin(), p)];
        let psi = PureState::product(&[f(0.3, 0.1), f(1.1, -0.7), f(2.0, 0.4)]).unwrap();
        let rho = psi.to_density();
        for a in Axis::ALL {
            for b in Axis::ALL {
                let v = connected_correlator(&psi, 0, a, 2, b).unwrap();
                assert!(v.abs() <= 1e-12, "{a}{b}: {v}");
                let w = connected_correlator(&rho, 1, a, 0, b).unwrap();
                assert!(w.abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn singlet_zz_correlator() {
        let h = 1.0 / 2f64.sqrt();
        let singlet = PureState::<f64>::new(vec![2, 2], vec![c(0.0, 0.0), c(h, 0.0), c(-h, 0.0), c(0.0, 0.0)]).unwrap();
        let v: f64 = connected_correlator(&singlet, 0, Axis::Z, 1, Axis::Z).unwrap();
        assert!((v + 1.0).abs() < 1e-15);
    }

    #[test]
    fn correlator_matches_dense_expectation_on_ground_state() {
        let h = build_hamiltonian(&ModelSpec::heisenberg(4, 1.0_f64)).unwrap();
        let g = ground_state(&h, qubit_dims(4)).unwrap();
        let psi = g.state.amplitudes();
        let expect = |m: &ComplexMatrix<f64>| {
            let mv = m.matvec(psi);
            psi.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum::<Complex<f64>>().re
        };
        let zz = expect(&embed(4, &[(0, Axis::Z), (3, Axis::Z)]));
        let z0 = expect(&embed(4, &[(0, Axis::Z)]));
        let z3 = expect(&embed(4, &[(3, Axis::Z)]));
        let oracle = zz - z0 * z3;
        let got = connected_correlator(&g.state, 0, Axis::Z, 3, Axis::Z).unwrap();
        assert!((got - oracle).abs() < 1e-12);
        // End-to-end spins of the open 4-site singlet are antiparallel on average
        // (odd distance), so the correlator is negative.
        assert!(got < 0.0);
    }

    #[test]
    fn correlator_symmetric_under_exchange() {
        let h = build_hamiltonian(&ModelSpec::transverse_ising(4, 1.0_f64, 0.8)).unwrap();
        let rho = thermal_state(&h, 0.7, qubit_dims(4)).unwrap();
        for a in Axis::ALL {
            for b in Axis::ALL {
                let x = connected_correlator(&rho, 0, a, 2, b).unwrap();
                let y = connected_correlator(&rho, 2, b, 0, a).unwrap();
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn same_site_rejected() {
        let rho = DensityMatrix::<f64>::maximally_mixed(vec![2, 2]);
        assert!(matches!(
            connected_correlator(&rho, 1, Axis::Z, 1, Axis::X),
            Err(LatticeError::SameSite(1))
        ));
    }
}
