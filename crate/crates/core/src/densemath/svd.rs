//! Thin singular value decomposition by one-sided (Hestenes) Jacobi.

use num_complex::Complex;

use super::{ComplexMatrix, DenseError};
use crate::scalar::Real;

/// `M = U diag(singular_values) V†` with `k = min(rows, cols)` columns in
/// `U` and `V`, singular values descending.
#[derive(Clone, Debug)]
pub struct Svd<T> {
    pub u: ComplexMatrix<T>,
    pub singular_values: Vec<T>,
    pub v: ComplexMatrix<T>,
}

impl<T: Real> Svd<T> {
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let mut us = self.u.clone();
        for i in 0..us.rows() {
            for (j, &s) in self.singular_values.iter().enumerate() {
                us[(i, j)] *= s;
            }
        }
        us.matmul(&self.v.adjoint())
    }
}

pub fn svd<T: Real>(m: &ComplexMatrix<T>) -> Result<Svd<T>, DenseError> {
    if m.rows() < m.cols() {
        let t = svd_tall(&m.adjoint())?;
        return Ok(Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        });
    }
    svd_tall(m)
}

fn svd_tall<T: Real>(m: &ComplexMatrix<T>) -> Result<Svd<T>, DenseError> {
    let (rows, cols) = (m.rows(), m.cols());
    // Column-major working copies.
    let mut a: Vec<Vec<Complex<T>>> = m.columns();
    let mut v: Vec<Vec<Complex<T>>> = (0..cols)
        .map(|j| {
            let mut e = vec![Complex::new(T::zero(), T::zero()); cols];
            e[j] = Complex::new(T::one(), T::zero());
            e
        })
        .collect();

    let eps = T::epsilon();
    let tiny = T::min_positive_value();
    let mut converged = cols < 2;
    for _sweep in 0..80 {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha: T = a[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: T = a[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma = a[p]
                    .iter()
                    .zip(&a[q])
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y);
                let g = gamma.norm();
                if g <= tiny || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (T::lit(2.0) * g);
                let sign = if zeta >= T::zero() { T::one() } else { -T::one() };
                let t = sign / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = cs * t;
                let sp = phase * sn;
                let sm = phase.conj() * sn;
                rotate_pair(&mut a, p, q, cs, sp, sm);
                rotate_pair(&mut v, p, q, cs, sp, sm);
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(DenseError::NoConvergence { routine: "one-sided Jacobi SVD" });
    }

    let norms: Vec<T> = a
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(std::cmp::Ordering::Equal));

    let smax = order.first().map_or(T::zero(), |&i| norms[i]);
    let cutoff = smax * eps * T::from_usize_lossy(rows.max(1));
    let mut u_cols: Vec<Vec<Complex<T>>> = Vec::with_capacity(cols);
    let mut v_cols = Vec::with_capacity(cols);
    let mut sv = Vec::with_capacity(cols);
    let mut missing = Vec::new();
    for (k, &j) in order.iter().enumerate() {
        let s = norms[j];
        if s > cutoff && s > T::zero() {
            u_cols.push(a[j].iter().map(|z| z / s).collect());
            sv.push(s);
        } else {
            u_cols.push(Vec::new());
            sv.push(T::zero());
            missing.push(k);
        }
        v_cols.push(v[j].clone());
    }
    complete_orthonormal(&mut u_cols, &missing, rows);

    Ok(Svd {
        u: ComplexMatrix::from_columns(rows, &u_cols),
        singular_values: sv,
        v: ComplexMatrix::from_columns(cols, &v_cols),
    })
}

/// Columns `(p, q) <- (cs*p - sm*q, sp*p + cs*q)`.
fn rotate_pair<T: Real>(
    cols: &mut [Vec<Complex<T>>],
    p: usize,
    q: usize,
    cs: T,
    sp: Complex<T>,
    sm: Complex<T>,
) {
    let (lo, hi) = cols.split_at_mut(q);
    let cp = &mut lo[p];
    let cq = &mut hi[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (xo, yo) = (*x, *y);
        *x = xo * cs - sm * yo;
        *y = sp * xo + yo * cs;
    }
}

/// Fills the empty slots listed in `missing` with unit vectors orthogonal
/// to every other column, by Gram-Schmidt over the standard basis.
fn complete_orthonormal<T: Real>(cols: &mut [Vec<Complex<T>>], missing: &[usize], dim: usize) {
    let mut candidate = 0;
    for &slot in missing {
        while candidate < dim {
            let mut e = vec![Complex::new(T::zero(), T::zero()); dim];
            e[candidate] = Complex::new(T::one(), T::zero());
            candidate += 1;
            for _ in 0..2 {
                for col in cols.iter().filter(|c| !c.is_empty()) {
                    let proj = col
                        .iter()
                        .zip(&e)
                        .fold(Complex::new(T::zero(), T::zero()), |acc, (c, x)| acc + c.conj() * x);
                    for (x, c) in e.iter_mut().zip(col) {
                        *x -= proj * c;
                    }
                }
            }
            let norm = e.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
            if norm > T::lit(0.5) {
                cols[slot] = e.into_iter().map(|z| z / norm).collect();
                break;
            }
        }
    }
}
