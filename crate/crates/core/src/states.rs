//! Pure and mixed states on labeled tensor-product spaces, and the ground,
//! thermal and reduced states built from them.

use num_complex::Complex;
use thiserror::Error;

use crate::densemath::{hermitian_eig, hermitian_eig_lowest, ComplexMatrix, DenseError};
use crate::densemath::{partial_trace_factors, HermitianEigen};
use crate::scalar::Real;

/// Normalization, Hermiticity, positivity and trace tolerance for states.
pub const STATE_TOL: f64 = 1e-10;

/// Two eigenvalues closer than this are treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("state is not normalized: norm^2 = {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },
    #[error("amplitude count {found} does not match factor dimensions (product {expected})")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("density matrix is not Hermitian: deviation {deviation:e}")]
    NotHermitian { deviation: f64 },
    #[error("density matrix has negative eigenvalue {eigenvalue:e}")]
    NegativeEigenvalue { eigenvalue: f64 },
    #[error("density matrix trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },
    #[error("invalid factor selection: {0}")]
    InvalidFactors(String),
    #[error("temperature must be non-negative, got {0}")]
    NegativeTemperature(f64),
    #[error(transparent)]
    Dense(#[from] DenseError),
}

/// Normalized vector over `C^{d0} ⊗ C^{d1} ⊗ ...`, first factor most
/// significant.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState<T> {
    dims: Vec<usize>,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> PureState<T> {
    pub fn new(dims: Vec<usize>, amplitudes: Vec<Complex<T>>) -> Result<Self, StateError> {
        check_dims(&dims, amplitudes.len())?;
        let norm_sqr: T = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - T::one()).abs() > T::tol(STATE_TOL) || norm_sqr.is_nan() {
            return Err(StateError::NotNormalized {
                norm_sqr: norm_sqr.to_f64_lossy(),
            });
        }
        Ok(Self { dims, amplitudes })
    }

    /// Rescales the amplitudes to unit norm.
    pub fn normalized(dims: Vec<usize>, mut amplitudes: Vec<Complex<T>>) -> Result<Self, StateError> {
        check_dims(&dims, amplitudes.len())?;
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm <= T::min_positive_value() || !norm.is_finite() {
            return Err(StateError::NotNormalized {
                norm_sqr: (norm * norm).to_f64_lossy(),
            });
        }
        for z in &mut amplitudes {
            *z /= norm;
        }
        Ok(Self { dims, amplitudes })
    }

    /// Tensor product of single-factor vectors (each normalized here).
    pub fn product(factors: &[Vec<Complex<T>>]) -> Result<Self, StateError> {
        let mut amps = vec![Complex::new(T::one(), T::zero())];
        let mut dims = Vec::with_capacity(factors.len());
        for f in factors {
            let norm = f.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
            if norm <= T::min_positive_value() {
                return Err(StateError::NotNormalized { norm_sqr: 0.0 });
            }
            dims.push(f.len());
            amps = amps
                .iter()
                .flat_map(|&a| f.iter().map(move |&b| a * b / norm))
                .collect();
        }
        Self::new(dims, amps)
    }

    /// Computational basis state `|index>`.
    pub fn basis(dims: Vec<usize>, index: usize) -> Result<Self, StateError> {
        let d: usize = dims.iter().product();
        if index >= d {
            return Err(StateError::InvalidFactors(format!("basis index {index} >= {d}")));
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); d];
        amps[index] = Complex::new(T::one(), T::zero());
        Self::new(dims, amps)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b)
    }

    pub fn to_density(&self) -> DensityMatrix<T> {
        DensityMatrix {
            dims: self.dims.clone(),
            matrix: ComplexMatrix::outer(&self.amplitudes, &self.amplitudes),
        }
    }

    /// Amplitudes arranged as a `dA x dB` matrix for the given split.
    pub fn split_matrix(&self, split: &Bipartition) -> Result<ComplexMatrix<T>, StateError> {
        let map = split.index_map(&self.dims)?;
        let (da, db) = split.dims(&self.dims);
        let mut data = vec![Complex::new(T::zero(), T::zero()); da * db];
        for (full, &new) in map.iter().enumerate() {
            data[new] = self.amplitudes[full];
        }
        Ok(ComplexMatrix::from_vec(da, db, data)?)
    }
}

/// Hermitian, positive semidefinite, unit-trace operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T> {
    dims: Vec<usize>,
    matrix: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates Hermiticity, positivity and trace within [`STATE_TOL`].
    pub fn new(dims: Vec<usize>, matrix: ComplexMatrix<T>) -> Result<Self, StateError> {
        check_dims(&dims, matrix.rows())?;
        if !matrix.is_square() {
            return Err(StateError::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        let tol = T::tol(STATE_TOL);
        let dev = matrix.hermitian_deviation();
        if dev > tol {
            return Err(StateError::NotHermitian {
                deviation: dev.to_f64_lossy(),
            });
        }
        let tr = matrix.trace().re;
        if (tr - T::one()).abs() > tol {
            return Err(StateError::TraceNotOne {
                trace: tr.to_f64_lossy(),
            });
        }
        let matrix = matrix.hermitian_part();
        let eig = crate::densemath::hermitian_eigvals(&matrix)?;
        if let Some(&min) = eig.first() {
            if min < -tol {
                return Err(StateError::NegativeEigenvalue {
                    eigenvalue: min.to_f64_lossy(),
                });
            }
        }
        Ok(Self { dims, matrix })
    }

    /// Builds `V diag(weights) V†` from an eigenbasis; weights must be
    /// non-negative and sum to one.
    pub(crate) fn from_spectrum(dims: Vec<usize>, eig: &HermitianEigen<T>, weights: &[T]) -> Self {
        Self {
            dims,
            matrix: eig.reconstruct_with(weights),
        }
    }

    /// Wraps a matrix that is a valid state by construction.
    pub(crate) fn from_trusted(dims: Vec<usize>, matrix: ComplexMatrix<T>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), matrix.rows());
        Self { dims, matrix }
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let d: usize = dims.iter().product();
        let matrix = ComplexMatrix::identity(d).scaled(T::one() / T::from_usize_lossy(d));
        Self { dims, matrix }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    /// Eigenvalues ascending.
    pub fn spectrum(&self) -> Result<Vec<T>, StateError> {
        Ok(crate::densemath::hermitian_eigvals(&self.matrix)?)
    }

    /// Matrix with factors reordered to `(A factors, B factors)`, so that
    /// the result acts on `C^dA ⊗ C^dB`.
    pub fn split_matrix(&self, split: &Bipartition) -> Result<ComplexMatrix<T>, StateError> {
        let map = split.index_map(&self.dims)?;
        let d = self.dim();
        let mut out = ComplexMatrix::zeros(d, d);
        for i in 0..d {
            let row = self.matrix.row(i);
            let ni = map[i];
            for (j, &z) in row.iter().enumerate() {
                out[(ni, map[j])] = z;
            }
        }
        Ok(out)
    }
}

fn check_dims(dims: &[usize], len: usize) -> Result<(), StateError> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(StateError::InvalidFactors(format!("bad factor dimensions {dims:?}")));
    }
    let expected: usize = dims.iter().product();
    if expected != len {
        return Err(StateError::DimensionMismatch {
            expected,
            found: len,
        });
    }
    Ok(())
}

/// Split of the tensor factors into two non-empty, disjoint groups that
/// together cover every factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    a: Vec<usize>,
    b: Vec<usize>,
}

impl Bipartition {
    pub fn new(mut a: Vec<usize>, mut b: Vec<usize>) -> Result<Self, StateError> {
        a.sort_unstable();
        b.sort_unstable();
        if a.is_empty() || b.is_empty() {
            return Err(StateError::InvalidFactors("both sides of a bipartition must be non-empty".into()));
        }
        if a.windows(2).any(|w| w[0] == w[1]) || b.windows(2).any(|w| w[0] == w[1]) {
            return Err(StateError::InvalidFactors("repeated factor in bipartition".into()));
        }
        if a.iter().any(|x| b.contains(x)) {
            return Err(StateError::InvalidFactors("bipartition sides overlap".into()));
        }
        Ok(Self { a, b })
    }

    /// `{0..k} | {k..n}`.
    pub fn contiguous(k: usize, n: usize) -> Result<Self, StateError> {
        Self::new((0..k).collect(), (k..n).collect())
    }

    pub fn a(&self) -> &[usize] {
        &self.a
    }

    pub fn b(&self) -> &[usize] {
        &self.b
    }

    pub fn swapped(&self) -> Self {
        Self {
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }

    /// `(dA, dB)` for a state with the given factor dimensions.
    pub fn dims(&self, dims: &[usize]) -> (usize, usize) {
        (
            self.a.iter().map(|&f| dims[f]).product(),
            self.b.iter().map(|&f| dims[f]).product(),
        )
    }

    pub fn validate_for(&self, dims: &[usize]) -> Result<(), StateError> {
        let n = dims.len();
        if self.a.len() + self.b.len() != n || self.a.iter().chain(&self.b).any(|&f| f >= n) {
            return Err(StateError::InvalidFactors(format!(
                "bipartition {:?}|{:?} does not cover {} factors",
                self.a, self.b, n
            )));
        }
        Ok(())
    }

    /// Maps each full index to its position in the `(A, B)`-ordered space.
    pub(crate) fn index_map(&self, dims: &[usize]) -> Result<Vec<usize>, StateError> {
        self.validate_for(dims)?;
        let (kept_of, traced_of, _da, db) = crate::densemath::split_indices(dims, &self.a)?;
        Ok(kept_of.iter().zip(&traced_of).map(|(&a, &b)| a * db + b).collect())
    }
}

/// Lowest eigenvector of a Hamiltonian, with degeneracy information.
#[derive(Clone, Debug)]
pub struct GroundState<T> {
    pub state: PureState<T>,
    pub energy: T,
    /// Gap to the first excited level, `None` for a one-dimensional space.
    pub gap: Option<T>,
    /// Dimension of the ground space (levels within [`DEGENERACY_TOL`]).
    pub degeneracy: usize,
}

impl<T: Real> GroundState<T> {
    pub fn is_degenerate(&self) -> bool {
        self.degeneracy > 1
    }
}

/// Ground state of `h` on factors `dims`. For a degenerate ground space
/// the solver's first vector is returned and `degeneracy > 1`.
pub fn ground_state<T: Real>(h: &ComplexMatrix<T>, dims: Vec<usize>) -> Result<GroundState<T>, StateError> {
    check_dims(&dims, h.rows())?;
    let eig = hermitian_eig_lowest(h, |_| 1)?;
    let e0 = eig.values[0];
    let degeneracy = ground_degeneracy(&eig.values);
    let gap = eig.values.get(1).map(|&e1| e1 - e0);
    let state = PureState::normalized(dims, eig.vector(0))?;
    Ok(GroundState {
        state,
        energy: e0,
        gap,
        degeneracy,
    })
}

fn ground_degeneracy<T: Real>(values: &[T]) -> usize {
    let e0 = values[0];
    let tol = T::tol(DEGENERACY_TOL) * T::one().max(e0.abs());
    values.iter().take_while(|&&e| e - e0 <= tol).count()
}

/// Gibbs state `exp(-h/kT)/Z`; `kT = 0` gives the uniform mixture over the
/// ground space.
pub fn thermal_state<T: Real>(h: &ComplexMatrix<T>, kt: T, dims: Vec<usize>) -> Result<DensityMatrix<T>, StateError> {
    if kt < T::zero() || kt.is_nan() {
        return Err(StateError::NegativeTemperature(kt.to_f64_lossy()));
    }
    check_dims(&dims, h.rows())?;
    let eig = hermitian_eig(h)?;
    Ok(thermal_from_eigen(&eig, kt, dims))
}

/// Gibbs state from an existing eigendecomposition of the Hamiltonian.
pub fn thermal_from_eigen<T: Real>(eig: &HermitianEigen<T>, kt: T, dims: Vec<usize>) -> DensityMatrix<T> {
    let weights = boltzmann_weights(&eig.values, kt);
    DensityMatrix::from_spectrum(dims, eig, &weights)
}

/// Normalized Boltzmann weights for an ascending spectrum. Energies are
/// shifted by the ground energy so every exponent is `<= 0`.
pub fn boltzmann_weights<T: Real>(values: &[T], kt: T) -> Vec<T> {
    let e0 = values[0];
    let mut w: Vec<T> = if kt == T::zero() {
        let g = ground_degeneracy(values);
        (0..values.len()).map(|i| if i < g { T::one() } else { T::zero() }).collect()
    } else {
        values.iter().map(|&e| (-(e - e0) / kt).exp()).collect()
    };
    let z: T = w.iter().copied().sum();
    for x in &mut w {
        *x /= z;
    }
    w
}

/// Partial trace onto a subset of tensor factors.
pub trait Reduce<T: Real> {
    /// Reduced state on the factors in `keep` (kept in ascending order).
    fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix<T>, StateError>;
}

fn normalize_keep(keep: &[usize], nf: usize) -> Result<Vec<usize>, StateError> {
    if keep.is_empty() {
        return Err(StateError::InvalidFactors("keep set is empty".into()));
    }
    let mut k = keep.to_vec();
    k.sort_unstable();
    k.dedup();
    if k.iter().any(|&f| f >= nf) {
        return Err(StateError::InvalidFactors(format!("factor index out of range in {keep:?}")));
    }
    Ok(k)
}

impl<T: Real> Reduce<T> for PureState<T> {
    fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix<T>, StateError> {
        let keep = normalize_keep(keep, self.dims.len())?;
        let dims: Vec<usize> = keep.iter().map(|&f| self.dims[f]).collect();
        if keep.len() == self.dims.len() {
            return Ok(self.to_density());
        }
        let b: Vec<usize> = (0..self.dims.len()).filter(|f| !keep.contains(f)).collect();
        let m = self.split_matrix(&Bipartition::new(keep, b)?)?;
        let rho = m.matmul(&m.adjoint()).hermitian_part();
        Ok(DensityMatrix::from_trusted(dims, rho))
    }
}

impl<T: Real> Reduce<T> for DensityMatrix<T> {
    fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix<T>, StateError> {
        let keep = normalize_keep(keep, self.dims.len())?;
        let dims: Vec<usize> = keep.iter().map(|&f| self.dims[f]).collect();
        let rho = partial_trace_factors(&self.matrix, &self.dims, &keep)?;
        Ok(DensityMatrix::from_trusted(dims, rho.hermitian_part()))
    }
}

/// `[2; n]`.
pub fn qubit_dims(n: usize) -> Vec<usize> {
    vec![2; n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    fn bell() -> PureState<f64> {
        let h = 1.0 / 2f64.sqrt();
        PureState::new(vec![2, 2], vec![c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)]).unwrap()
    }

    #[test]
    fn rejects_unnormalized_amplitudes() {
        let err = PureState::<f64>::new(vec![2], vec![c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(err, Err(StateError::NotNormalized { .. })));
    }

    #[test]
    fn density_validation_catches_each_violation() {
        let bad_trace = ComplexMatrix::<f64>::identity(2);
        assert!(matches!(DensityMatrix::new(vec![2], bad_trace), Err(StateError::TraceNotOne { .. })));
        let neg = ComplexMatrix::<f64>::from_diagonal(&[1.5, -0.5]);
        assert!(matches!(DensityMatrix::new(vec![2], neg), Err(StateError::NegativeEigenvalue { .. })));
        let nonherm = ComplexMatrix::<f64>::from_real_rows(&[&[0.5, 0.1], &[0.0, 0.5]]);
        assert!(matches!(DensityMatrix::new(vec![2], nonherm), Err(StateError::NotHermitian { .. })));
    }

    #[test]
    fn sigma_z_ground_state_is_spin_down() {
        let z = ComplexMatrix::<f64>::from_diagonal(&[1.0, -1.0]);
        let g = ground_state(&z, vec![2]).unwrap();
        assert!((g.energy + 1.0).abs() < 1e-15);
        assert!((g.state.amplitudes()[1].norm() - 1.0).abs() < 1e-15);
        assert_eq!(g.degeneracy, 1);
    }

    #[test]
    fn degenerate_ground_space_is_flagged() {
        let h = ComplexMatrix::<f64>::from_diagonal(&[0.0, 0.0, 1.0]);
        let g = ground_state(&h, vec![3]).unwrap();
        assert!(g.is_degenerate());
        let rho = thermal_state(&h, 0.0, vec![3]).unwrap();
        assert!((rho.matrix()[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((rho.matrix()[(1, 1)].re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn infinite_temperature_is_maximally_mixed() {
        let h = ComplexMatrix::<f64>::from_diagonal(&[-1.0, 0.3, 2.0, 0.0]);
        let rho = thermal_state(&h, 1e6, vec![2, 2]).unwrap();
        let mixed = DensityMatrix::<f64>::maximally_mixed(vec![2, 2]);
        // trace distance of commuting diagonals
        let td: f64 = (0..4).map(|i| (rho.matrix()[(i, i)].re - mixed.matrix()[(i, i)].re).abs()).sum::<f64>() / 2.0;
        assert!(td < 1e-4);
    }

    #[test]
    fn zero_temperature_nondegenerate_is_projector() {
        let h = ComplexMatrix::<f64>::from_diagonal(&[0.5, -1.0]);
        let rho = thermal_state(&h, 0.0, vec![2]).unwrap();
        assert_eq!(rho.matrix()[(1, 1)].re, 1.0);
        assert_eq!(rho.matrix()[(0, 0)].re, 0.0);
    }

    #[test]
    fn negative_temperature_rejected() {
        let h = ComplexMatrix::<f64>::identity(2);
        assert!(matches!(thermal_state(&h, -0.1, vec![2]), Err(StateError::NegativeTemperature(_))));
    }

    #[test]
    fn small_temperature_does_not_overflow() {
        let h = ComplexMatrix::<f64>::from_diagonal(&[-1000.0, 1000.0]);
        let rho = thermal_state(&h, 1e-3, vec![2]).unwrap();
        assert!((rho.matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bell_reduces_to_maximally_mixed() {
        let r = bell().reduce(&[0]).unwrap();
        assert!(r.matrix().max_abs_diff(&ComplexMatrix::identity(2).scaled(0.5)) < 1e-15);
        let r = bell().to_density().reduce(&[1]).unwrap();
        assert!(r.matrix().max_abs_diff(&ComplexMatrix::identity(2).scaled(0.5)) < 1e-15);
    }

    #[test]
    fn product_state_reduces_to_factor_projector() {
        let up = vec![c(1.0, 0.0), c(0.0, 0.0)];
        let plus = vec![c(1.0, 0.0), c(1.0, 0.0)];
        let tri = vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)];
        let psi = PureState::<f64>::product(&[up, plus.clone(), tri]).unwrap();
        let r = psi.reduce(&[1]).unwrap();
        let expected = ComplexMatrix::outer(&plus, &plus).scaled(0.5);
        assert!(r.matrix().max_abs_diff(&expected) < 1e-15);
        assert_eq!(r.dims(), &[2]);
    }

    #[test]
    fn empty_keep_rejected() {
        assert!(matches!(bell().reduce(&[]), Err(StateError::InvalidFactors(_))));
    }

    #[test]
    fn reduce_pure_and_mixed_routes_agree_on_noncontiguous_keep() {
        let amps: Vec<_> = (0..24).map(|i| c::<f64>((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos())).collect();
        let psi = PureState::normalized(vec![2, 3, 4], amps).unwrap();
        let a = psi.reduce(&[2, 0]).unwrap();
        let b = psi.to_density().reduce(&[0, 2]).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-14);
        assert_eq!(a.dims(), &[2, 4]);
    }

    #[test]
    fn bipartition_validation() {
        assert!(Bipartition::new(vec![0], vec![0, 1]).is_err());
        assert!(Bipartition::new(vec![], vec![0]).is_err());
        let split = Bipartition::new(vec![0], vec![2]).unwrap();
        assert!(split.validate_for(&[2, 2, 2]).is_err());
    }
}
