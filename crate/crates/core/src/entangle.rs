//! Bipartite entanglement and distinguishability measures.
//!
//! Entropies use base-2 logarithms, so results are in bits (ebits for
//! entanglement). Spectra are clipped at [`SPECTRAL_CUTOFF`] before logs
//! and square roots.

use num_complex::Complex;
use thiserror::Error;

use crate::densemath::{hermitian_eig, hermitian_eigvals, matrix_sqrt, svd, ComplexMatrix, DenseError};
use crate::scalar::{xlog2x_neg, Real};
use crate::states::{Bipartition, DensityMatrix, PureState, Reduce, StateError};

/// Probabilities and spectral values at or below this are treated as zero.
pub const SPECTRAL_CUTOFF: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EntangleError {
    #[error("two-qubit measure needs a 4-dimensional state, got dimension {0}")]
    NotTwoQubit(usize),
    #[error("states have different dimensions ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Dense(#[from] DenseError),
}

/// `|Ψ> = Σ_α √p_α |u^α> ⊗ |v^α>` with `p` descending.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition<T> {
    pub coefficients: Vec<T>,
    pub basis_a: Vec<Vec<Complex<T>>>,
    pub basis_b: Vec<Vec<Complex<T>>>,
}

impl<T: Real> SchmidtDecomposition<T> {
    /// Number of nonzero Schmidt coefficients.
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_entangled(&self) -> bool {
        self.rank() > 1
    }

    /// Entanglement entropy `-Σ p log2 p`.
    pub fn entropy(&self) -> T {
        let cut = T::tol(SPECTRAL_CUTOFF);
        self.coefficients.iter().map(|&p| xlog2x_neg(p, cut)).sum()
    }

    /// Amplitudes of `Σ √p u ⊗ v` in the `(A, B)`-ordered basis.
    pub fn reconstruct(&self) -> Vec<Complex<T>> {
        let da = self.basis_a.first().map_or(0, Vec::len);
        let db = self.basis_b.first().map_or(0, Vec::len);
        let mut out = vec![Complex::new(T::zero(), T::zero()); da * db];
        for ((&p, u), v) in self.coefficients.iter().zip(&self.basis_a).zip(&self.basis_b) {
            let s = p.sqrt();
            for (i, &ui) in u.iter().enumerate() {
                for (j, &vj) in v.iter().enumerate() {
                    out[i * db + j] += ui * vj * s;
                }
            }
        }
        out
    }
}

pub fn schmidt_decompose<T: Real>(
    psi: &PureState<T>,
    split: &Bipartition,
) -> Result<SchmidtDecomposition<T>, EntangleError> {
    let m = psi.split_matrix(split)?;
    let d = svd(&m)?;
    let cut = T::tol(SPECTRAL_CUTOFF);
    let mut coefficients = Vec::new();
    let mut basis_a = Vec::new();
    let mut basis_b = Vec::new();
    for (k, &s) in d.singular_values.iter().enumerate() {
        let p = s * s;
        if p <= cut {
            break;
        }
        coefficients.push(p);
        basis_a.push(d.u.column(k));
        // M = U S V†, so the B vector is the conjugate of column k of V.
        basis_b.push(d.v.column(k).iter().map(|z| z.conj()).collect());
    }
    let total: T = coefficients.iter().copied().sum();
    for p in &mut coefficients {
        *p /= total;
    }
    Ok(SchmidtDecomposition {
        coefficients,
        basis_a,
        basis_b,
    })
}

/// Shannon entropy in bits of a probability vector, ignoring entries at or
/// below [`SPECTRAL_CUTOFF`].
pub fn shannon_entropy<T: Real>(probs: &[T]) -> T {
    let cut = T::tol(SPECTRAL_CUTOFF);
    probs.iter().map(|&p| xlog2x_neg(p, cut)).sum()
}

/// `-tr ρ log2 ρ`.
pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>) -> Result<T, EntangleError> {
    let ev = rho.spectrum()?;
    Ok(shannon_entropy(&ev).max(T::zero()))
}

/// `h(x) = -x log2 x - (1-x) log2 (1-x)`.
pub fn binary_entropy<T: Real>(x: T) -> T {
    let cut = T::tol(SPECTRAL_CUTOFF);
    xlog2x_neg(x, cut) + xlog2x_neg(T::one() - x, cut)
}

fn require_two_qubit<T: Real>(rho: &DensityMatrix<T>) -> Result<(), EntangleError> {
    if rho.dim() == 4 {
        Ok(())
    } else {
        Err(EntangleError::NotTwoQubit(rho.dim()))
    }
}

/// `ρ̃ = (σ^y ⊗ σ^y) ρ* (σ^y ⊗ σ^y)`.
pub fn spin_flip<T: Real>(rho: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    // σ^y ⊗ σ^y is the anti-diagonal with signs (-1, 1, 1, -1).
    let sign = |k: usize| if k == 0 || k == 3 { -T::one() } else { T::one() };
    ComplexMatrix::from_fn(4, 4, |i, j| rho[(3 - i, 3 - j)].conj() * (sign(3 - i) * sign(3 - j)))
}

/// Wootters concurrence of a two-qubit state.
///
/// The Wootters values (square roots of the eigenvalues of `ρ ρ̃`) are
/// computed as the singular values of `Rᵀ (σ^y ⊗ σ^y) R` for `ρ = R R†`,
/// which avoids square roots of near-zero eigenvalues.
pub fn concurrence<T: Real>(rho: &DensityMatrix<T>) -> Result<T, EntangleError> {
    require_two_qubit(rho)?;
    let eig = hermitian_eig(rho.matrix())?;
    let cut = T::tol(SPECTRAL_CUTOFF);
    let cols: Vec<Vec<Complex<T>>> = (0..4)
        .rev()
        .filter(|&k| eig.values[k] > cut)
        .map(|k| {
            let s = eig.values[k].sqrt();
            eig.vector(k).into_iter().map(|z| z * s).collect()
        })
        .collect();
    if cols.is_empty() {
        return Ok(T::zero());
    }
    let r = ComplexMatrix::from_columns(4, &cols);
    let yr = ComplexMatrix::from_fn(4, r.cols(), |i, j| {
        let s = if i == 0 || i == 3 { -T::one() } else { T::one() };
        r[(3 - i, j)] * s
    });
    let tau = r.transpose().matmul(&yr);
    let mu = svd(&tau)?.singular_values;
    let c = mu.iter().enumerate().fold(T::zero(), |acc, (i, &m)| if i == 0 { acc + m } else { acc - m });
    Ok(c.max(T::zero()).min(T::one()))
}

/// Entanglement of formation from a concurrence value.
pub fn eof_from_concurrence<T: Real>(c: T) -> T {
    let c = c.max(T::zero()).min(T::one());
    let x = (T::one() + (T::one() - c * c).max(T::zero()).sqrt()) * T::lit(0.5);
    binary_entropy(x)
}

/// Two-qubit entanglement of formation in ebits.
pub fn eof_two_qubits<T: Real>(rho: &DensityMatrix<T>) -> Result<T, EntangleError> {
    Ok(eof_from_concurrence(concurrence(rho)?))
}

/// `(tr √(√ρ1 ρ2 √ρ1))²`.
pub fn fidelity<T: Real>(rho1: &DensityMatrix<T>, rho2: &DensityMatrix<T>) -> Result<T, EntangleError> {
    if rho1.dim() != rho2.dim() {
        return Err(EntangleError::DimensionMismatch(rho1.dim(), rho2.dim()));
    }
    let sq = matrix_sqrt(rho1.matrix())?;
    let m = rho2.matrix().conjugate_by(&sq).hermitian_part();
    let cut = T::tol(SPECTRAL_CUTOFF);
    let s: T = hermitian_eigvals(&m)?
        .into_iter()
        .filter(|&x| x > cut)
        .map(|x| x.sqrt())
        .sum();
    Ok((s * s).min(T::one()))
}

/// Entropic lower bound on the entanglement of a bipartite state:
/// `max(0, S(A) - S(AB), S(B) - S(AB))` in ebits.
pub fn eof_lower_bound<T: Real>(rho: &DensityMatrix<T>, split: &Bipartition) -> Result<T, EntangleError> {
    split.validate_for(rho.dims())?;
    let s_ab = von_neumann_entropy(rho)?;
    let s_a = von_neumann_entropy(&rho.reduce(split.a())?)?;
    let s_b = von_neumann_entropy(&rho.reduce(split.b())?)?;
    Ok((s_a - s_ab).max(s_b - s_ab).max(T::zero()))
}
