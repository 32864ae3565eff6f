//! Entanglement-maximizing projection.
//!
//! The retained subspace is searched over isometries directly: ascent along
//! the tangent-projected gradient, QR retraction back onto the isometries,
//! backtracking step control. Gradients are central differences of a smooth
//! extension of the objective to all full-rank `W`. Restarts are seeded
//! deterministically from `(seed, restart index)`; restart 0 starts from the
//! DMRG subspace, so the result never falls below it.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{gram_schmidt, renormalized, top_eigenspace, Isometry, RenormError};
use crate::densemath::{hermitian_eig, hermitian_eigvals, kron, svd, ComplexMatrix};
use crate::entangle::{eof_from_concurrence, shannon_entropy, SPECTRAL_CUTOFF};
use crate::scalar::Real;
use crate::states::{Bipartition, DensityMatrix, PureState, Reduce};

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerConfig {
    /// Random restarts, in addition to the DMRG-seeded one.
    pub restarts: usize,
    pub seed: u64,
    /// Stop once the objective gains less than this over `patience` steps.
    pub tolerance: f64,
    pub patience: usize,
    /// Step cap per restart.
    pub max_steps: usize,
    pub initial_step: f64,
    /// Include the DMRG subspace as restart 0.
    pub seed_with_dmrg: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            seed: 0,
            tolerance: 1e-8,
            patience: 50,
            max_steps: 5000,
            initial_step: 0.1,
            seed_with_dmrg: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EmpPureResult<T> {
    pub isometry: Isometry<T>,
    /// Entropy of the renormalized block state, in bits.
    pub entropy: T,
    /// Same quantity for the DMRG subspace.
    pub dmrg_entropy: T,
    /// Restart that produced the result; 0 is the DMRG seed when enabled.
    pub best_restart: usize,
    /// The DMRG cut was degenerate.
    pub degenerate_cut: bool,
}

#[derive(Clone, Debug)]
pub struct EmpMixedResult<T> {
    pub isometry_a: Isometry<T>,
    pub isometry_b: Isometry<T>,
    /// Entanglement of formation of the renormalized pair, in ebits.
    pub eof: T,
    pub concurrence: T,
    /// EoF of the DMRG pair.
    pub dmrg_eof: T,
    pub best_restart: usize,
    /// Either DMRG cut was degenerate.
    pub degenerate_cut: bool,
}

/// Objective over one or more isometry blocks, `None` where it is
/// undefined (vanishing retained trace).
trait Objective<T: Real>: Sync {
    fn shapes(&self) -> &[(usize, usize)];
    fn eval(&self, ws: &[ComplexMatrix<T>]) -> Option<T>;

    /// Value and Euclidean gradient `G` (with `df = Re tr(G† dW)`) of a
    /// smooth extension to all full-rank `W`. Central differences unless
    /// overridden.
    fn value_and_grad(&self, ws: &[ComplexMatrix<T>]) -> Option<(T, Vec<ComplexMatrix<T>>)> {
        let value = self.eval(ws)?;
        let h = T::epsilon().cbrt();
        let two_h = h + h;
        let mut ws = ws.to_vec();
        let mut grads = Vec::with_capacity(ws.len());
        for b in 0..ws.len() {
            let (r, c) = (ws[b].rows(), ws[b].cols());
            let mut g = ComplexMatrix::zeros(r, c);
            for i in 0..r {
                for j in 0..c {
                    for unit in [Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::one())] {
                        let orig = ws[b][(i, j)];
                        ws[b][(i, j)] = orig + unit * h;
                        let fp = self.eval(&ws);
                        ws[b][(i, j)] = orig - unit * h;
                        let fm = self.eval(&ws);
                        ws[b][(i, j)] = orig;
                        if let (Some(p), Some(m)) = (fp, fm) {
                            g[(i, j)] += unit * ((p - m) / two_h);
                        }
                    }
                }
            }
            grads.push(g);
        }
        Some((value, grads))
    }
}

struct PureObjective<T> {
    rho_a: ComplexMatrix<T>,
    shape: [(usize, usize); 1],
}

impl<T: Real> Objective<T> for PureObjective<T> {
    fn shapes(&self) -> &[(usize, usize)] {
        &self.shape
    }

    fn eval(&self, ws: &[ComplexMatrix<T>]) -> Option<T> {
        let s = renormalized(&self.rho_a, &ws[0])?;
        let ev = hermitian_eigvals(&s).ok()?;
        Some(shannon_entropy(&ev))
    }
}

/// Wootters objective on the compressed pair. With `ρ = R0 R0†` and
/// `R = K† R0` for `K = W_A ⊗ W_B`, the Wootters values `λ_i` of the
/// normalized compressed state are the singular values of
/// `Rᵀ (σ^y ⊗ σ^y) R / tr(R R†)`.
struct MixedObjective<T> {
    r0: ComplexMatrix<T>,
    shape: [(usize, usize); 2],
}

impl<T: Real> MixedObjective<T> {
    fn new(rho_ab: &ComplexMatrix<T>, shape: [(usize, usize); 2]) -> Result<Self, RenormError> {
        let eig = hermitian_eig(rho_ab)?;
        let cut = T::tol(SPECTRAL_CUTOFF);
        let d = rho_ab.rows();
        let cols: Vec<Vec<Complex<T>>> = (0..d)
            .rev()
            .filter(|&k| eig.values[k] > cut)
            .map(|k| {
                let s = eig.values[k].sqrt();
                eig.vector(k).into_iter().map(|z| z * s).collect()
            })
            .collect();
        if cols.is_empty() {
            return Err(RenormError::DegenerateInput);
        }
        Ok(Self {
            r0: ComplexMatrix::from_columns(d, &cols),
            shape,
        })
    }

    /// `(λ1 - λ2 - λ3 - λ4, optional gradient w.r.t. K)`.
    fn evaluate(&self, k: &ComplexMatrix<T>, want_grad: bool) -> Option<(T, Option<ComplexMatrix<T>>)> {
        let r = k.adjoint_matmul(&self.r0);
        let t = r.frobenius_norm_sqr();
        if !(t > T::tol(super::MIN_RETAINED_TRACE)) {
            return None;
        }
        // R = P Σ Q†, so Rᵀ Y R = conj(Q) (Σ Pᵀ Y P Σ) Q†.
        let outer = svd(&r).ok()?;
        let n = outer.singular_values.len();
        let ps = ComplexMatrix::from_fn(4, n, |i, j| outer.u[(i, j)] * outer.singular_values[j]);
        let tau = ps.transpose().matmul(&flip_y(&ps));
        let inner = svd(&tau).ok()?;
        let mu = &inner.singular_values;
        let sign = |i: usize| if i == 0 { T::one() } else { -T::one() };
        let g: T = mu.iter().enumerate().map(|(i, &m)| sign(i) * m).sum();
        let value = g / t;
        if !want_grad {
            return Some((value, None));
        }
        // Z = Σ s_i (conj(u_i) v_iᵀ + v_i u_i†) in the inner basis
        let mut z = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            let (u, v) = (inner.u.column(i), inner.v.column(i));
            for a in 0..n {
                for b in 0..n {
                    z[(a, b)] += (u[a].conj() * v[b] + v[a] * u[b].conj()) * sign(i);
                }
            }
        }
        // dg/dK = (R0 Q) Z (Σ Pᵀ) Y ; dt/dK = 2 R0 R†
        let r0q = self.r0.matmul(&outer.v);
        let grad_g = r0q.matmul(&z).matmul(&flip_y(&ps).transpose());
        let grad_t = self.r0.matmul(&r.adjoint()).scaled(T::lit(2.0));
        let grad = (&grad_g - &grad_t.scaled(value)).scaled(T::one() / t);
        Some((value, Some(grad)))
    }
}

/// `Y X` for `Y = σ^y ⊗ σ^y`, the real anti-diagonal `(-1, 1, 1, -1)`.
fn flip_y<T: Real>(x: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(4, x.cols(), |i, j| {
        let s = if i == 0 || i == 3 { -T::one() } else { T::one() };
        x[(3 - i, j)] * s
    })
}

impl<T: Real> Objective<T> for MixedObjective<T> {
    fn shapes(&self) -> &[(usize, usize)] {
        &self.shape
    }

    fn eval(&self, ws: &[ComplexMatrix<T>]) -> Option<T> {
        self.evaluate(&kron(&ws[0], &ws[1]), false).map(|(v, _)| v)
    }

    fn value_and_grad(&self, ws: &[ComplexMatrix<T>]) -> Option<(T, Vec<ComplexMatrix<T>>)> {
        let (wa, wb) = (&ws[0], &ws[1]);
        let (value, gk) = self.evaluate(&kron(wa, wb), true)?;
        let gk = gk?;
        let (da, ma) = (wa.rows(), wa.cols());
        let (db, mb) = (wb.rows(), wb.cols());
        let mut ga = ComplexMatrix::zeros(da, ma);
        let mut gb = ComplexMatrix::zeros(db, mb);
        for a in 0..da {
            for i in 0..ma {
                for b in 0..db {
                    for j in 0..mb {
                        let g = gk[(a * db + b, i * mb + j)];
                        ga[(a, i)] += g * wb[(b, j)].conj();
                        gb[(b, j)] += g * wa[(a, i)].conj();
                    }
                }
            }
        }
        Some((value, vec![ga, gb]))
    }
}

struct Ascent<T> {
    ws: Vec<ComplexMatrix<T>>,
    value: T,
}

fn ascend<T: Real, O: Objective<T>>(obj: &O, start: Vec<ComplexMatrix<T>>, cfg: &OptimizerConfig) -> Option<Ascent<T>> {
    let mut ws = start;
    let (mut value, mut egrad) = obj.value_and_grad(&ws)?;
    let mut step = T::lit(cfg.initial_step);
    let min_step = T::lit(1e-12);
    let tol = T::lit(cfg.tolerance);
    let mut history = vec![value];

    for _ in 0..cfg.max_steps {
        // tangent projection G - W sym(W†G)
        let grads: Vec<ComplexMatrix<T>> = ws
            .iter()
            .zip(&egrad)
            .map(|(w, g)| {
                let wg = w.adjoint_matmul(g);
                let sym = (&wg + &wg.adjoint()).scaled(T::lit(0.5));
                g - &w.matmul(&sym)
            })
            .collect();
        let gnorm: T = grads.iter().map(|g| g.frobenius_norm_sqr()).sum::<T>().sqrt();
        if !(gnorm > T::lit(1e-14)) {
            break;
        }

        let mut accepted = None;
        while step >= min_step {
            let trial: Option<Vec<ComplexMatrix<T>>> = ws
                .iter()
                .zip(&grads)
                .map(|(w, g)| gram_schmidt(&(w + &g.scaled(step))))
                .collect();
            if let Some(trial) = trial {
                if obj.eval(&trial).is_some_and(|v| v > value) {
                    if let Some((v, g)) = obj.value_and_grad(&trial) {
                        accepted = Some((trial, v, g));
                        step = (step * T::lit(2.0)).min(T::one());
                        break;
                    }
                }
            }
            step *= T::lit(0.5);
        }
        let Some((trial, v, g)) = accepted else {
            break;
        };
        ws = trial;
        value = v;
        egrad = g;
        history.push(value);
        let n = history.len();
        if n > cfg.patience && value - history[n - 1 - cfg.patience] < tol {
            break;
        }
    }
    Some(Ascent { ws, value })
}

/// Runs every restart and keeps the best; ties go to the lowest index.
fn optimize<T: Real, O: Objective<T>>(
    obj: &O,
    seed_start: Option<Vec<ComplexMatrix<T>>>,
    cfg: &OptimizerConfig,
) -> Result<(Ascent<T>, usize), RenormError> {
    let offset = usize::from(seed_start.is_some());
    let total = cfg.restarts + offset;
    let results: Vec<Option<Ascent<T>>> = (0..total)
        .into_par_iter()
        .map(|k| {
            let start = if k < offset {
                seed_start.clone()?
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(k as u64);
                obj.shapes()
                    .iter()
                    .map(|&(d, m)| Isometry::random(d, m, &mut rng).map(Isometry::into_matrix))
                    .collect::<Result<Vec<_>, _>>()
                    .ok()?
            };
            ascend(obj, start, cfg)
        })
        .collect();
    let mut best: Option<(Ascent<T>, usize)> = None;
    for (k, r) in results.into_iter().enumerate() {
        if let Some(a) = r {
            if best.as_ref().is_none_or(|(b, _)| a.value > b.value) {
                best = Some((a, k));
            }
        }
    }
    best.ok_or(RenormError::DegenerateInput)
}

/// Rank-`m` projection on side A maximizing the entropy of the
/// renormalized block state `W†ρ_A W / tr(W†ρ_A W)`.
pub fn emp_projection_pure<T: Real>(
    psi: &PureState<T>,
    split: &Bipartition,
    m: usize,
    cfg: &OptimizerConfig,
) -> Result<EmpPureResult<T>, RenormError> {
    split.validate_for(psi.dims())?;
    let rho_a = psi.reduce(split.a())?.into_matrix();
    let d = rho_a.rows();
    let dmrg = top_eigenspace(&rho_a, m)?;
    let obj = PureObjective {
        rho_a,
        shape: [(d, m)],
    };
    let dmrg_entropy = obj.eval(&[dmrg.isometry.matrix().clone()]).unwrap_or(T::zero());
    if m == d {
        return Ok(EmpPureResult {
            isometry: Isometry::identity(d),
            entropy: dmrg_entropy,
            dmrg_entropy,
            best_restart: 0,
            degenerate_cut: false,
        });
    }
    let seed = cfg.seed_with_dmrg.then(|| vec![dmrg.isometry.matrix().clone()]);
    let (best, k) = optimize(&obj, seed, cfg)?;
    let mut ws = best.ws;
    Ok(EmpPureResult {
        isometry: Isometry::from_trusted(ws.remove(0)),
        entropy: best.value.max(T::zero()),
        dmrg_entropy,
        best_restart: k,
        degenerate_cut: dmrg.degenerate_cut,
    })
}

/// Pair of projections (rank `mA` on A, rank `mB` on B) maximizing the
/// entanglement of formation of the renormalized two-qubit state.
pub fn emp_projection_mixed<T: Real>(
    rho: &DensityMatrix<T>,
    split: &Bipartition,
    m_a: usize,
    m_b: usize,
    cfg: &OptimizerConfig,
) -> Result<EmpMixedResult<T>, RenormError> {
    if m_a * m_b != 4 {
        return Err(RenormError::NotTwoQubit { m_a, m_b });
    }
    split.validate_for(rho.dims())?;
    let rho_ab = rho.split_matrix(split)?;
    let pa = top_eigenspace(rho.reduce(split.a())?.matrix(), m_a)?;
    let pb = top_eigenspace(rho.reduce(split.b())?.matrix(), m_b)?;
    let (da, db) = (pa.isometry.d(), pb.isometry.d());
    let degenerate_cut = pa.degenerate_cut || pb.degenerate_cut;
    let obj = MixedObjective::new(&rho_ab, [(da, m_a), (db, m_b)])?;
    let dmrg_ws = vec![pa.isometry.matrix().clone(), pb.isometry.matrix().clone()];
    let eof_of = |ws: &[ComplexMatrix<T>]| -> Option<(T, T)> {
        let c = obj.eval(ws)?.max(T::zero()).min(T::one());
        Some((c, eof_from_concurrence(c)))
    };
    let dmrg_eof = eof_of(&dmrg_ws).map_or(T::zero(), |(_, e)| e);

    // A 1 x 4 split carries no entanglement; nothing to optimize.
    if m_a == 1 || m_b == 1 {
        return Ok(EmpMixedResult {
            isometry_a: pa.isometry,
            isometry_b: pb.isometry,
            eof: T::zero(),
            concurrence: T::zero(),
            dmrg_eof: T::zero(),
            best_restart: 0,
            degenerate_cut,
        });
    }
    if m_a == da && m_b == db {
        let ws = vec![ComplexMatrix::identity(da), ComplexMatrix::identity(db)];
        let (c, e) = eof_of(&ws).ok_or(RenormError::DegenerateInput)?;
        return Ok(EmpMixedResult {
            isometry_a: Isometry::identity(da),
            isometry_b: Isometry::identity(db),
            eof: e,
            concurrence: c,
            dmrg_eof,
            best_restart: 0,
            degenerate_cut: false,
        });
    }

    let seed = cfg.seed_with_dmrg.then_some(dmrg_ws);
    let (best, k) = optimize(&obj, seed, cfg)?;
    let (c, e) = eof_of(&best.ws).ok_or(RenormError::DegenerateInput)?;
    let mut ws = best.ws.into_iter();
    Ok(EmpMixedResult {
        isometry_a: Isometry::from_trusted(ws.next().expect("two blocks")),
        isometry_b: Isometry::from_trusted(ws.next().expect("two blocks")),
        eof: e,
        concurrence: c,
        dmrg_eof,
        best_restart: k,
        degenerate_cut,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densemath::kron;
    use crate::entangle::{concurrence, eof_two_qubits, von_neumann_entropy};
    use crate::lattice::{build_hamiltonian, ModelSpec};
    use crate::scalar::c;
    use crate::states::{qubit_dims, thermal_state};
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn quick(restarts: usize) -> OptimizerConfig {
        OptimizerConfig {
            restarts,
            seed: 7,
            ..OptimizerConfig::default()
        }
    }

    fn random_state(seed: u64, dims: Vec<usize>) -> PureState<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d: usize = dims.iter().product();
        let amps = (0..d)
            .map(|_| Complex::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal)))
            .collect();
        PureState::normalized(dims, amps).unwrap()
    }

    fn thermal_pair(kt: f64) -> (ComplexMatrix<f64>, DensityMatrix<f64>) {
        let h = build_hamiltonian(&ModelSpec::heisenberg(4, 1.0_f64)).unwrap();
        let rho = thermal_state(&h, kt, qubit_dims(4)).unwrap();
        let split = Bipartition::contiguous(2, 4).unwrap();
        (rho.split_matrix(&split).unwrap(), rho)
    }

    #[test]
    fn mixed_objective_value_is_the_wootters_combination() {
        let (rho_ab, _) = thermal_pair(0.4);
        let obj = MixedObjective::new(&rho_ab, [(4, 2), (4, 2)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let wa = Isometry::<f64>::random(4, 2, &mut rng).unwrap();
            let wb = Isometry::<f64>::random(4, 2, &mut rng).unwrap();
            let v = obj.eval(&[wa.matrix().clone(), wb.matrix().clone()]).unwrap();
            let sigma = renormalized(&rho_ab, wa.kron(&wb).matrix()).unwrap();
            let c = concurrence(&DensityMatrix::new(qubit_dims(2), sigma).unwrap()).unwrap();
            assert!((v.max(0.0) - c).abs() < 1e-9, "{v} vs {c}");
        }
    }

    #[test]
    fn analytic_gradient_matches_finite_differences() {
        let (rho_ab, _) = thermal_pair(0.7);
        let obj = MixedObjective::new(&rho_ab, [(4, 2), (4, 2)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let ws = vec![
            Isometry::<f64>::random(4, 2, &mut rng).unwrap().into_matrix(),
            Isometry::<f64>::random(4, 2, &mut rng).unwrap().into_matrix(),
        ];
        let (_, analytic) = obj.value_and_grad(&ws).unwrap();
        let h = 1e-6;
        for b in 0..2 {
            for i in 0..4 {
                for j in 0..2 {
                    for unit in [Complex::new(1.0, 0.0), Complex::new(0.0, 1.0)] {
                        let mut p = ws.clone();
                        p[b][(i, j)] += unit * h;
                        let mut m = ws.clone();
                        m[b][(i, j)] -= unit * h;
                        let fd = (obj.eval(&p).unwrap() - obj.eval(&m).unwrap()) / (2.0 * h);
                        let proj = (analytic[b][(i, j)].conj() * unit).re;
                        assert!((fd - proj).abs() < 1e-6, "block {b} ({i},{j}): {fd} vs {proj}");
                    }
                }
            }
        }
    }

    #[test]
    fn full_rank_pure_projection_is_identity() {
        let psi = random_state(3, qubit_dims(4));
        let split = Bipartition::contiguous(2, 4).unwrap();
        let r = emp_projection_pure(&psi, &split, 4, &quick(2)).unwrap();
        let s = von_neumann_entropy(&psi.reduce(&[0, 1]).unwrap()).unwrap();
        assert!((r.entropy - s).abs() < 1e-10);
        assert_eq!(r.isometry.m(), 4);
    }

    #[test]
    fn product_state_has_nothing_to_keep() {
        let psi = PureState::<f64>::product(&[
            vec![c(1.0, 0.0), c(0.3, 0.0)],
            vec![c(0.2, 0.1), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let split = Bipartition::contiguous(2, 3).unwrap();
        let r = emp_projection_pure(&psi, &split, 2, &quick(3)).unwrap();
        assert!(r.entropy.abs() < 1e-9);
    }

    #[test]
    fn pure_emp_dominates_dmrg() {
        for seed in 0..4 {
            let psi = random_state(seed, qubit_dims(4));
            let split = Bipartition::contiguous(2, 4).unwrap();
            let r = emp_projection_pure(&psi, &split, 2, &quick(4)).unwrap();
            assert!(r.entropy >= r.dmrg_entropy - 1e-9);
            assert!(r.entropy <= 1.0 + 1e-12);
            assert!(Isometry::new(r.isometry.matrix().clone()).is_ok());
            // two-dimensional subspace with equal weights exists unless one
            // eigenvalue of ρ_A carries more than the rest combined
            let ev = psi.reduce(&[0, 1]).unwrap().spectrum().unwrap();
            if ev[3] <= ev[0] + ev[1] + ev[2] {
                assert!(r.entropy > 1.0 - 1e-6, "seed {seed}: {}", r.entropy);
            }
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let psi = random_state(9, qubit_dims(4));
        let split = Bipartition::contiguous(2, 4).unwrap();
        let a = emp_projection_pure(&psi, &split, 1, &quick(3)).unwrap();
        let b = emp_projection_pure(&psi, &split, 1, &quick(3)).unwrap();
        assert_eq!(a.entropy, b.entropy);
        assert_eq!(a.isometry, b.isometry);
    }

    #[test]
    fn two_qubit_identity_maps() {
        let h = build_hamiltonian(&ModelSpec::heisenberg(2, 1.0_f64)).unwrap();
        let rho = thermal_state(&h, 0.8, qubit_dims(2)).unwrap();
        let split = Bipartition::contiguous(1, 2).unwrap();
        let r = emp_projection_mixed(&rho, &split, 2, 2, &quick(2)).unwrap();
        assert!((r.eof - eof_two_qubits(&rho).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn separable_input_gives_zero() {
        let a = DensityMatrix::new(vec![2, 2], {
            let x = ComplexMatrix::<f64>::from_real_rows(&[&[0.6, 0.1], &[0.1, 0.4]]);
            kron(&x, &ComplexMatrix::from_diagonal(&[0.3, 0.7]))
        })
        .unwrap();
        let b = DensityMatrix::<f64>::maximally_mixed(vec![2, 2]);
        let m = kron(a.matrix(), b.matrix());
        let rho = DensityMatrix::new(qubit_dims(4), m).unwrap();
        let split = Bipartition::contiguous(2, 4).unwrap();
        let r = emp_projection_mixed(&rho, &split, 2, 2, &quick(2)).unwrap();
        assert_eq!(r.eof, 0.0);
    }

    #[test]
    fn rejects_non_qubit_targets() {
        let rho = DensityMatrix::<f64>::maximally_mixed(qubit_dims(4));
        let split = Bipartition::contiguous(2, 4).unwrap();
        assert!(matches!(
            emp_projection_mixed(&rho, &split, 2, 3, &quick(1)),
            Err(RenormError::NotTwoQubit { .. })
        ));
    }

    #[test]
    fn mixed_emp_dominates_dmrg_on_heisenberg() {
        let split = Bipartition::contiguous(2, 4).unwrap();
        for kt in [0.1, 0.5] {
            let (_, rho) = thermal_pair(kt);
            let r = emp_projection_mixed(&rho, &split, 2, 2, &quick(4)).unwrap();
            assert!(r.eof >= r.dmrg_eof - 1e-9);
            let projected = renormalized(
                &rho.split_matrix(&split).unwrap(),
                r.isometry_a.kron(&r.isometry_b).matrix(),
            )
            .unwrap();
            let check = eof_two_qubits(&DensityMatrix::new(qubit_dims(2), projected).unwrap()).unwrap();
            assert!((check - r.eof).abs() < 1e-10);
        }
    }
}
