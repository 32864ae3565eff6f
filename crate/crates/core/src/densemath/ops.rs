use super::{hermitian_eig, ComplexMatrix, DenseError, CLIP_TOL};
use crate::scalar::Real;

/// Tensor product `a ⊗ b`, `a` the more significant factor.
pub fn kron<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let x = a[(i, j)];
            if x.re == T::zero() && x.im == T::zero() {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = x * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Which side of a bipartition survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    A,
    B,
}

/// Partial trace of an operator on `C^dA ⊗ C^dB`.
pub fn partial_trace<T: Real>(
    rho: &ComplexMatrix<T>,
    dims: (usize, usize),
    keep: Keep,
) -> Result<ComplexMatrix<T>, DenseError> {
    let keep_idx = match keep {
        Keep::A => [0usize],
        Keep::B => [1usize],
    };
    partial_trace_factors(rho, &[dims.0, dims.1], &keep_idx)
}

/// Partial trace over every factor not listed in `keep`. Kept factors
/// stay in ascending order.
pub fn partial_trace_factors<T: Real>(
    rho: &ComplexMatrix<T>,
    dims: &[usize],
    keep: &[usize],
) -> Result<ComplexMatrix<T>, DenseError> {
    let total: usize = dims.iter().product();
    if !rho.is_square() {
        return Err(DenseError::NotSquare {
            rows: rho.rows(),
            cols: rho.cols(),
        });
    }
    if rho.rows() != total {
        return Err(DenseError::DimensionMismatch {
            expected: total,
            found: rho.rows(),
        });
    }
    let (kept_of, traced_of, dk, dt) = split_indices(dims, keep)?;

    // groups[t][k] = full index with traced part t and kept part k.
    let mut groups = vec![vec![0usize; dk]; dt];
    for full in 0..total {
        groups[traced_of[full]][kept_of[full]] = full;
    }
    let mut out = ComplexMatrix::zeros(dk, dk);
    for g in &groups {
        for (k1, &i) in g.iter().enumerate() {
            let row = rho.row(i);
            for (k2, &j) in g.iter().enumerate() {
                out[(k1, k2)] += row[j];
            }
        }
    }
    Ok(out)
}

/// For every full index, its kept-part and traced-part indices.
pub(crate) fn split_indices(
    dims: &[usize],
    keep: &[usize],
) -> Result<(Vec<usize>, Vec<usize>, usize, usize), DenseError> {
    let nf = dims.len();
    let mut is_kept = vec![false; nf];
    for &k in keep {
        if k >= nf {
            return Err(DenseError::DimensionMismatch {
                expected: nf,
                found: k + 1,
            });
        }
        is_kept[k] = true;
    }
    let dk: usize = (0..nf).filter(|&f| is_kept[f]).map(|f| dims[f]).product();
    let dt: usize = (0..nf).filter(|&f| !is_kept[f]).map(|f| dims[f]).product();
    let total = dk * dt;
    let mut kept_of = vec![0usize; total];
    let mut traced_of = vec![0usize; total];
    let mut digits = vec![0usize; nf];
    for full in 0..total {
        let mut kidx = 0;
        let mut tidx = 0;
        for f in 0..nf {
            if is_kept[f] {
                kidx = kidx * dims[f] + digits[f];
            } else {
                tidx = tidx * dims[f] + digits[f];
            }
        }
        kept_of[full] = kidx;
        traced_of[full] = tidx;
        // increment mixed-radix counter, last factor fastest
        for f in (0..nf).rev() {
            digits[f] += 1;
            if digits[f] < dims[f] {
                break;
            }
            digits[f] = 0;
        }
    }
    Ok((kept_of, traced_of, dk, dt))
}

/// Where the scalar function passed to [`matrix_function`] is defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// Any real eigenvalue.
    Real,
    /// Non-negative eigenvalues; values in `[-CLIP_TOL, 0)` are clipped to 0.
    NonNegative,
}

/// `V f(Λ) V†` for Hermitian `m`.
pub fn matrix_function<T: Real>(
    m: &ComplexMatrix<T>,
    domain: Domain,
    f: impl Fn(T) -> T,
) -> Result<ComplexMatrix<T>, DenseError> {
    let eig = hermitian_eig(m)?;
    let clip = T::tol(CLIP_TOL);
    let mut fvals = Vec::with_capacity(eig.values.len());
    for &lam in &eig.values {
        let x = match domain {
            Domain::Real => lam,
            Domain::NonNegative if lam >= T::zero() => lam,
            Domain::NonNegative if lam >= -clip => T::zero(),
            Domain::NonNegative => {
                return Err(DenseError::FunctionUndefined {
                    eigenvalue: lam.to_f64_lossy(),
                })
            }
        };
        let y = f(x);
        if !y.is_finite() {
            return Err(DenseError::FunctionUndefined {
                eigenvalue: lam.to_f64_lossy(),
            });
        }
        fvals.push(y);
    }
    Ok(eig.reconstruct_with(&fvals))
}

pub fn matrix_sqrt<T: Real>(m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>, DenseError> {
    matrix_function(m, Domain::NonNegative, |x| x.sqrt())
}

pub fn matrix_exp<T: Real>(m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>, DenseError> {
    matrix_function(m, Domain::Real, |x| x.exp())
}
