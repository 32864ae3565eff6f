//! Dense complex linear algebra.
//!
//! Matrices are stored row-major. Hermitian routines check their input
//! before running (see [`HERMITIAN_TOL`]). Basis conventions used by the
//! rest of the crate: the first tensor factor is the most significant
//! index, so `kron(a, b)[(i*db + k, j*db + l)] = a[(i, j)] * b[(k, l)]`.

mod eigen;
mod matrix;
mod ops;
mod svd;

pub use eigen::{hermitian_eig, hermitian_eig_lowest, hermitian_eigvals, HermitianEigen, LowestEigen};
pub use matrix::ComplexMatrix;
pub use ops::{
    kron, matrix_exp, matrix_function, matrix_sqrt, partial_trace, partial_trace_factors,
    Domain, Keep,
};
pub use svd::{svd, Svd};

pub(crate) use ops::split_indices;

use thiserror::Error;

/// Maximum tolerated `max|M - M†|` for inputs to Hermitian-only routines,
/// relative to `max(1, max|M|)`.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues in `[-CLIP_TOL, 0)` are treated as zero by functions that
/// are only defined on the non-negative axis.
pub const CLIP_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DenseError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: max|M - M^dagger| = {deviation:e}")]
    NotHermitian { deviation: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("function undefined at eigenvalue {eigenvalue:e}")]
    FunctionUndefined { eigenvalue: f64 },
    #[error("{routine} did not converge")]
    NoConvergence { routine: &'static str },
}
