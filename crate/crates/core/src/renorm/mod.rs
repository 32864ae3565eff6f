//! Block renormalization: truncation by projection onto a retained
//! subspace, the density-matrix and entanglement-maximizing choices of that
//! subspace, and iterative Wilson / DMRG runs.

mod emp;
mod rg;

pub use emp::{emp_projection_mixed, emp_projection_pure, EmpMixedResult, EmpPureResult, OptimizerConfig};
pub use rg::{dmrg_run, wilson_run, RgRunReport, RgStep};

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::densemath::{hermitian_eig, ComplexMatrix, DenseError};
use crate::entangle::EntangleError;
use crate::lattice::LatticeError;
use crate::scalar::Real;
use crate::states::{Bipartition, DensityMatrix, PureState, Reduce, StateError, DEGENERACY_TOL};

/// Orthonormality tolerance for isometry columns.
pub const ISOMETRY_TOL: f64 = 1e-9;

/// Smallest retained trace accepted before renormalizing a projected state.
pub const MIN_RETAINED_TRACE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RenormError {
    #[error("retained dimension {m} is invalid for ambient dimension {d}")]
    InvalidRank { m: usize, d: usize },
    #[error("columns are not orthonormal (deviation {0:e})")]
    NotOrthonormal(f64),
    #[error("isometry acts on dimension {found}, block has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("two-qubit entanglement needs mA*mB = 4, got {m_a}*{m_b}")]
    NotTwoQubit { m_a: usize, m_b: usize },
    #[error("projected state has vanishing trace for every candidate subspace")]
    DegenerateInput,
    #[error("block renormalization requires open boundaries")]
    PeriodicUnsupported,
    #[error("{0}")]
    InvalidRun(String),
    #[error("superblock dimension {dim} exceeds the dense limit {max}")]
    SuperblockTooLarge { dim: usize, max: usize },
    #[error(transparent)]
    Dense(#[from] DenseError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Entangle(#[from] EntangleError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// `d x m` matrix with orthonormal columns spanning the retained subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct Isometry<T> {
    w: ComplexMatrix<T>,
}

impl<T: Real> Isometry<T> {
    pub fn new(w: ComplexMatrix<T>) -> Result<Self, RenormError> {
        let (d, m) = (w.rows(), w.cols());
        if m == 0 || m > d {
            return Err(RenormError::InvalidRank { m, d });
        }
        let dev = w
            .adjoint_matmul(&w)
            .max_abs_diff(&ComplexMatrix::identity(m));
        if dev > T::tol(ISOMETRY_TOL) || dev.is_nan() {
            return Err(RenormError::NotOrthonormal(dev.to_f64_lossy()));
        }
        Ok(Self { w })
    }

    pub(crate) fn from_trusted(w: ComplexMatrix<T>) -> Self {
        Self { w }
    }

    pub fn identity(d: usize) -> Self {
        Self {
            w: ComplexMatrix::identity(d),
        }
    }

    /// Orthonormalizes the columns of `m` (Gram-Schmidt, positive `R`
    /// diagonal). Fails if the columns are numerically dependent.
    pub fn orthonormalize(m: &ComplexMatrix<T>) -> Result<Self, RenormError> {
        match gram_schmidt(m) {
            Some(w) => Ok(Self { w }),
            None => Err(RenormError::InvalidRank {
                m: m.cols(),
                d: m.rows(),
            }),
        }
    }

    /// Haar-random isometry (QR of a complex Gaussian matrix).
    pub fn random<R: Rng + ?Sized>(d: usize, m: usize, rng: &mut R) -> Result<Self, RenormError> {
        if m == 0 || m > d {
            return Err(RenormError::InvalidRank { m, d });
        }
        loop {
            let g = ComplexMatrix::from_fn(d, m, |_, _| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex::new(T::lit(re), T::lit(im))
            });
            if let Some(w) = gram_schmidt(&g) {
                return Ok(Self { w });
            }
        }
    }

    /// Ambient dimension.
    pub fn d(&self) -> usize {
        self.w.rows()
    }

    /// Retained dimension.
    pub fn m(&self) -> usize {
        self.w.cols()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.w
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.w
    }

    /// `P = W W†`.
    pub fn projector(&self) -> ComplexMatrix<T> {
        self.w.matmul(&self.w.adjoint())
    }

    /// `max|P - Q|` between the two projectors.
    pub fn projector_distance(&self, other: &Self) -> T {
        self.projector().max_abs_diff(&other.projector())
    }

    /// `W† O W`.
    pub fn compress(&self, op: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        op.conjugate_by(&self.w)
    }

    /// `W1 ⊗ W2`.
    pub fn kron(&self, other: &Self) -> Self {
        Self {
            w: crate::densemath::kron(&self.w, &other.w),
        }
    }

    fn check_dim(&self, expected: usize) -> Result<(), RenormError> {
        if self.d() != expected {
            return Err(RenormError::DimensionMismatch {
                expected,
                found: self.d(),
            });
        }
        Ok(())
    }
}

pub(crate) fn gram_schmidt<T: Real>(m: &ComplexMatrix<T>) -> Option<ComplexMatrix<T>> {
    let (d, k) = (m.rows(), m.cols());
    let mut cols: Vec<Vec<Complex<T>>> = Vec::with_capacity(k);
    let floor = T::epsilon().sqrt();
    for j in 0..k {
        let mut v = m.column(j);
        let scale = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        // two passes for numerical orthogonality
        for _ in 0..2 {
            for q in &cols {
                let proj: Complex<T> = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= *qi * proj;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if !(norm > floor * scale) || norm == T::zero() {
            return None;
        }
        for vi in &mut v {
            *vi /= norm;
        }
        cols.push(v);
    }
    Some(ComplexMatrix::from_columns(d, &cols))
}

/// `|| |Ψ> - (P ⊗ 1)|Ψ> ||²` with `P` acting on side A of the split.
pub fn truncation_error<T: Real>(
    p: &Isometry<T>,
    psi: &PureState<T>,
    split: &Bipartition,
) -> Result<T, RenormError> {
    let m = psi.split_matrix(split)?;
    p.check_dim(m.rows())?;
    let pm = p.w.matmul(&p.w.adjoint_matmul(&m));
    let err = (&m - &pm).frobenius_norm_sqr();
    Ok(err.max(T::zero()).min(T::one()))
}

/// `tr(W† ρ W)`, the weight of `ρ` inside the retained subspace.
pub fn retained_weight<T: Real>(p: &Isometry<T>, rho: &ComplexMatrix<T>) -> Result<T, RenormError> {
    p.check_dim(rho.rows())?;
    Ok(p.compress(rho).trace().re)
}

/// Retained subspace chosen from the spectrum of a reduced density matrix.
#[derive(Clone, Debug)]
pub struct DmrgProjection<T> {
    pub isometry: Isometry<T>,
    /// All eigenvalues of the reduced density matrix, descending.
    pub weights: Vec<T>,
    /// The m-th and (m+1)-th eigenvalues coincide, so the retained subspace
    /// is not unique; the solver's order decided it.
    pub degenerate_cut: bool,
}

impl<T: Real> DmrgProjection<T> {
    /// Sum of the retained eigenvalues.
    pub fn retained(&self) -> T {
        self.weights[..self.isometry.m()].iter().copied().sum()
    }
}

/// Top-`m` eigenvectors of a Hermitian operator, descending.
pub(crate) fn top_eigenspace<T: Real>(rho: &ComplexMatrix<T>, m: usize) -> Result<DmrgProjection<T>, RenormError> {
    let d = rho.rows();
    if m == 0 || m > d {
        return Err(RenormError::InvalidRank { m, d });
    }
    let eig = hermitian_eig(rho)?;
    let weights: Vec<T> = eig.values.iter().rev().copied().collect();
    let cols: Vec<_> = (0..m).map(|k| eig.vector(d - 1 - k)).collect();
    let degenerate_cut = m < d && (weights[m - 1] - weights[m]).abs() <= T::tol(DEGENERACY_TOL);
    Ok(DmrgProjection {
        isometry: Isometry::from_trusted(ComplexMatrix::from_columns(d, &cols)),
        weights,
        degenerate_cut,
    })
}

/// Keeps the `m` Schmidt vectors of side A with the largest weights, which
/// minimizes the truncation error over all rank-`m` projections.
pub fn dmrg_projection<T: Real>(
    psi: &PureState<T>,
    split: &Bipartition,
    m: usize,
) -> Result<DmrgProjection<T>, RenormError> {
    split.validate_for(psi.dims())?;
    let rho_a = psi.reduce(split.a())?;
    top_eigenspace(rho_a.matrix(), m)
}

/// Keeps the `m` eigenvectors of `tr_B ρ_AB` with the largest eigenvalues.
pub fn dmrg_projection_mixed<T: Real>(
    rho: &DensityMatrix<T>,
    split: &Bipartition,
    m: usize,
) -> Result<DmrgProjection<T>, RenormError> {
    split.validate_for(rho.dims())?;
    let rho_a = rho.reduce(split.a())?;
    top_eigenspace(rho_a.matrix(), m)
}

/// `W† ρ W / tr(W† ρ W)`, or `None` if the retained trace vanishes.
pub(crate) fn renormalized<T: Real>(rho: &ComplexMatrix<T>, w: &ComplexMatrix<T>) -> Option<ComplexMatrix<T>> {
    let c = rho.conjugate_by(w);
    let tr = c.trace().re;
    if !(tr > T::tol(MIN_RETAINED_TRACE)) {
        return None;
    }
    Some(c.scaled(T::one() / tr).hermitian_part())
}

/// `(W_A ⊗ W_B)† ρ_AB (W_A ⊗ W_B)`, renormalized to unit trace, as a state
/// on factors `[mA, mB]`.
pub fn project_pair<T: Real>(
    rho: &DensityMatrix<T>,
    split: &Bipartition,
    wa: &Isometry<T>,
    wb: &Isometry<T>,
) -> Result<DensityMatrix<T>, RenormError> {
    let rho_ab = rho.split_matrix(split)?;
    let (da, db) = split.dims(rho.dims());
    wa.check_dim(da)?;
    wb.check_dim(db)?;
    let m = renormalized(&rho_ab, wa.kron(wb).matrix()).ok_or(RenormError::DegenerateInput)?;
    Ok(DensityMatrix::from_trusted(vec![wa.m(), wb.m()], m))
}
