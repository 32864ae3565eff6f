//! Hermitian eigensolver: Householder reduction to real symmetric
//! tridiagonal form followed by implicit QL iterations.
//!
//! Inputs with an exactly zero imaginary part take a pure real path.

use num_complex::Complex;

use super::{ComplexMatrix, DenseError};
use crate::scalar::{Entry, Real};

/// Spectral decomposition `M = V diag(values) V†`, values ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    /// Eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn vector(&self, k: usize) -> Vec<Complex<T>> {
        self.vectors.column(k)
    }

    /// `V f(Λ) V†` for already-evaluated `f(Λ)`.
    pub fn reconstruct_with(&self, fvals: &[T]) -> ComplexMatrix<T> {
        let n = self.vectors.rows();
        let k = fvals.len();
        assert_eq!(k, self.vectors.cols());
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            let vi = self.vectors.row(i);
            for j in i..n {
                let vj = self.vectors.row(j);
                let mut acc = Complex::new(T::zero(), T::zero());
                for a in 0..k {
                    if fvals[a] != T::zero() {
                        acc += vi[a] * vj[a].conj() * fvals[a];
                    }
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
            out[(i, i)] = Complex::new(out[(i, i)].re, T::zero());
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.reconstruct_with(&self.values)
    }
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn hermitian_eig<T: Real>(m: &ComplexMatrix<T>) -> Result<HermitianEigen<T>, DenseError> {
    m.ensure_hermitian()?;
    let n = m.rows();
    if n == 0 {
        return Ok(HermitianEigen {
            values: vec![],
            vectors: ComplexMatrix::zeros(0, 0),
        });
    }
    if m.is_real() {
        let a: Vec<T> = m.data().iter().map(|z| z.re).collect();
        eig_generic::<T, T>(a, n, true).map(|(v, q)| (v, q.unwrap()))
    } else {
        let a = m.hermitian_part().into_data();
        eig_generic::<T, Complex<T>>(a, n, true).map(|(v, q)| (v, q.unwrap()))
    }
    .map(|(values, vectors)| HermitianEigen { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigvals<T: Real>(m: &ComplexMatrix<T>) -> Result<Vec<T>, DenseError> {
    m.ensure_hermitian()?;
    let n = m.rows();
    if n == 0 {
        return Ok(vec![]);
    }
    if m.is_real() {
        let a: Vec<T> = m.data().iter().map(|z| z.re).collect();
        eig_generic::<T, T>(a, n, false).map(|(v, _)| v)
    } else {
        let a = m.hermitian_part().into_data();
        eig_generic::<T, Complex<T>>(a, n, false).map(|(v, _)| v)
    }
}

type EigOut<T> = (Vec<T>, Option<ComplexMatrix<T>>);

/// Householder reduction plus the diagonal phases that make the
/// tridiagonal real: `A = Q D T D† Q†` with `T` real symmetric (`d`, `off`).
struct Reduced<T, E> {
    tri: Tridiagonal<T, E>,
    phases: Vec<E>,
    off: Vec<T>,
}

fn reduce<T: Real, E: Entry<T>>(mut a: Vec<E>, n: usize) -> Reduced<T, E> {
    let tri = tridiagonalize::<T, E>(&mut a, n);
    let mut phases = vec![E::from_real(T::one()); n];
    let mut off = vec![T::zero(); n];
    for k in 0..n.saturating_sub(1) {
        let e = tri.sub[k];
        let r = e.modulus();
        off[k] = r;
        phases[k + 1] = if r > T::zero() {
            phases[k] * e.scale(T::one() / r)
        } else {
            phases[k]
        };
    }
    Reduced { tri, phases, off }
}

fn ascending<T: Real>(d: &[T]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap_or(std::cmp::Ordering::Equal));
    order
}

fn eig_generic<T: Real, E: Entry<T>>(a: Vec<E>, n: usize, want_vectors: bool) -> Result<EigOut<T>, DenseError> {
    let Reduced { tri, phases, mut off } = reduce::<T, E>(a, n);
    let mut d = tri.diag;

    let mut zt = if want_vectors {
        let mut z = vec![T::zero(); n * n];
        for i in 0..n {
            z[i * n + i] = T::one();
        }
        Some(z)
    } else {
        None
    };
    tql2(&mut d, &mut off, zt.as_deref_mut(), n)?;

    let order = ascending(&d);
    let values: Vec<T> = order.iter().map(|&i| d[i]).collect();

    let Some(zt) = zt else {
        return Ok((values, None));
    };

    // V = Q D Z; rows of `zt` are the columns of Z.
    let mut q = form_q::<T, E>(&tri.reflectors, n);
    for i in 0..n {
        for (j, p) in phases.iter().enumerate() {
            q[i * n + j] *= *p;
        }
    }
    let mut vecs = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        let qrow = &q[r * n..(r + 1) * n];
        for (col, &src) in order.iter().enumerate() {
            let zrow = &zt[src * n..(src + 1) * n];
            let mut acc = E::zero();
            for (qv, &zv) in qrow.iter().zip(zrow) {
                acc += qv.scale(zv);
            }
            vecs[(r, col)] = acc.to_complex();
        }
    }
    Ok((values, Some(vecs)))
}

/// Full spectrum with eigenvectors for the lowest levels only.
#[derive(Clone, Debug)]
pub struct LowestEigen<T> {
    /// All eigenvalues, ascending.
    pub values: Vec<T>,
    /// Eigenvectors of the first `vectors.cols()` values, as columns.
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> LowestEigen<T> {
    pub fn vector(&self, k: usize) -> Vec<Complex<T>> {
        self.vectors.column(k)
    }
}

/// All eigenvalues plus eigenvectors of the `count(values)` lowest ones.
///
/// Vectors come from inverse iteration on the tridiagonal form, so the cost
/// beyond the eigenvalues is `O(n^2)` per vector instead of the `O(n^3)`
/// accumulation of a full decomposition.
pub fn hermitian_eig_lowest<T: Real>(
    m: &ComplexMatrix<T>,
    count: impl FnOnce(&[T]) -> usize,
) -> Result<LowestEigen<T>, DenseError> {
    m.ensure_hermitian()?;
    let n = m.rows();
    if n == 0 {
        return Ok(LowestEigen {
            values: vec![],
            vectors: ComplexMatrix::zeros(0, 0),
        });
    }
    if m.is_real() {
        let a: Vec<T> = m.data().iter().map(|z| z.re).collect();
        lowest_generic::<T, T>(a, n, count)
    } else {
        let a = m.hermitian_part().into_data();
        lowest_generic::<T, Complex<T>>(a, n, count)
    }
}

fn lowest_generic<T: Real, E: Entry<T>>(
    a: Vec<E>,
    n: usize,
    count: impl FnOnce(&[T]) -> usize,
) -> Result<LowestEigen<T>, DenseError> {
    let red = reduce::<T, E>(a, n);
    let diag = red.tri.diag.clone();
    let mut d = diag.clone();
    let mut e = red.off.clone();
    tql2(&mut d, &mut e, None, n)?;
    let values: Vec<T> = ascending(&d).into_iter().map(|i| d[i]).collect();
    let k = count(&values).min(n);

    let tnorm = (0..n).fold(T::zero(), |acc, i| {
        let left = if i > 0 { red.off[i - 1].abs() } else { T::zero() };
        acc.max(diag[i].abs() + red.off[i].abs() + left)
    });
    // vectors of levels closer than this are kept mutually orthogonal
    let cluster = T::lit(1e-3) * tnorm;
    let mut xs: Vec<Vec<T>> = Vec::with_capacity(k);
    let mut vecs = ComplexMatrix::zeros(n, k);
    for j in 0..k {
        let lambda = values[j];
        let peers: Vec<usize> = (0..j).filter(|&i| (values[i] - lambda).abs() <= cluster).collect();
        let x = inverse_iteration(&diag, &red.off, lambda, tnorm, j, |x| {
            for &i in &peers {
                let c: T = xs[i].iter().zip(x.iter()).map(|(a, b)| *a * *b).sum();
                for (xv, pv) in x.iter_mut().zip(&xs[i]) {
                    *xv -= c * *pv;
                }
            }
        })?;
        // back to the original basis: Q D x
        let mut y: Vec<E> = x.iter().zip(&red.phases).map(|(&xi, p)| p.scale(xi)).collect();
        for r in red.tri.reflectors.iter().rev() {
            let s = r.start;
            let mut dot = E::zero();
            for (vi, yi) in r.v.iter().zip(&y[s..]) {
                dot += vi.conj() * *yi;
            }
            let f = dot.scale(T::lit(r.tau));
            for (vi, yi) in r.v.iter().zip(y[s..].iter_mut()) {
                *yi -= *vi * f;
            }
        }
        for (i, yi) in y.iter().enumerate() {
            vecs[(i, j)] = yi.to_complex();
        }
        xs.push(x);
    }
    Ok(LowestEigen { values, vectors: vecs })
}

/// Eigenvector of the real symmetric tridiagonal `(d, off)` for the
/// eigenvalue `lambda`, by inverse iteration with a pivoted LU of
/// `T - lambda I`. `project` removes components along already computed
/// vectors of nearby eigenvalues.
fn inverse_iteration<T: Real>(
    d: &[T],
    off: &[T],
    lambda: T,
    tnorm: T,
    seed: usize,
    project: impl Fn(&mut Vec<T>),
) -> Result<Vec<T>, DenseError> {
    let n = d.len();
    let eps = T::epsilon();
    let tiny = eps * tnorm.max(T::min_positive_value().sqrt());
    let sub = |i: usize| if i + 1 < n { off[i] } else { T::zero() };

    // U rows hold columns (i, i+1, i+2); `mult[i]` eliminates row i+1.
    let mut u = vec![(T::zero(), T::zero(), T::zero()); n];
    let mut mult = vec![(T::zero(), false); n];
    let mut cur = (d[0] - lambda, sub(0));
    for i in 0..n - 1 {
        let below = off[i];
        let next = (d[i + 1] - lambda, sub(i + 1));
        if cur.0.abs() >= below.abs() {
            let l = if cur.0 == T::zero() { T::zero() } else { below / cur.0 };
            u[i] = (cur.0, cur.1, T::zero());
            cur = (next.0 - l * cur.1, next.1);
            mult[i] = (l, false);
        } else {
            let l = cur.0 / below;
            u[i] = (below, next.0, next.1);
            cur = (cur.1 - l * next.0, -l * next.1);
            mult[i] = (l, true);
        }
    }
    u[n - 1] = (cur.0, T::zero(), T::zero());
    for row in &mut u {
        if row.0.abs() < tiny {
            row.0 = if row.0 < T::zero() { -tiny } else { tiny };
        }
    }

    let solve = |b: &mut Vec<T>| {
        for i in 0..n - 1 {
            let (l, swap) = mult[i];
            if swap {
                b.swap(i, i + 1);
            }
            let bi = b[i];
            b[i + 1] -= l * bi;
        }
        for i in (0..n).rev() {
            let mut acc = b[i];
            if i + 1 < n {
                acc -= u[i].1 * b[i + 1];
            }
            if i + 2 < n {
                acc -= u[i].2 * b[i + 2];
            }
            b[i] = acc / u[i].0;
        }
    };
    let normalize = |b: &mut Vec<T>| {
        let nrm = b.iter().map(|x| *x * *x).sum::<T>().sqrt();
        for x in b.iter_mut() {
            *x /= nrm;
        }
    };

    // deterministic, generic start vector
    let mut x: Vec<T> = (0..n)
        .map(|i| T::lit(((i * 7919 + seed * 104_729 + 13) % 1009) as f64 / 1009.0 - 0.5))
        .collect();
    project(&mut x);
    normalize(&mut x);
    let tol = T::lit(64.0) * eps * tnorm.max(T::one()) * T::from_usize_lossy(n).sqrt();
    for _ in 0..12 {
        solve(&mut x);
        project(&mut x);
        normalize(&mut x);
        let residual = (0..n)
            .map(|i| {
                let mut r = (d[i] - lambda) * x[i];
                if i > 0 {
                    r += off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    r += off[i] * x[i + 1];
                }
                r * r
            })
            .sum::<T>()
            .sqrt();
        if residual <= tol {
            return Ok(x);
        }
    }
    Err(DenseError::NoConvergence { routine: "tridiagonal inverse iteration" })
}

struct Reflector<E> {
    /// Reflection acts on indices `start..n`.
    start: usize,
    v: Vec<E>,
    tau: f64,
}

struct Tridiagonal<T, E> {
    diag: Vec<T>,
    /// `sub[k]` is the entry at `(k+1, k)`.
    sub: Vec<E>,
    reflectors: Vec<Reflector<E>>,
}

/// Householder vector for `x`: `(I - tau v v†) x = alpha e_0`. `Err(x[0])`
/// when `x` already has no component below its first entry.
fn householder<T: Real, E: Entry<T>>(x: &[E]) -> Result<(Vec<E>, T, E), E> {
    if x.len() < 2 {
        return Err(x[0]);
    }
    // Work with x / max|x_i| so tiny residual columns cannot underflow.
    let scale = x.iter().fold(T::zero(), |acc, z| acc.max(z.modulus()));
    if scale == T::zero() {
        return Err(x[0]);
    }
    let inv = T::one() / scale;
    let mut v: Vec<E> = x.iter().map(|z| z.scale(inv)).collect();
    let sigma2: T = v[1..].iter().map(|z| z.norm_sqr()).sum();
    if sigma2 == T::zero() {
        return Err(x[0]);
    }
    let x0 = v[0];
    let x0_abs = x0.modulus();
    let xnorm = (x0.norm_sqr() + sigma2).sqrt();
    let phase = if x0_abs > T::zero() {
        x0.scale(T::one() / x0_abs)
    } else {
        E::from_real(T::one())
    };
    let alpha = -phase.scale(xnorm * scale);
    v[0] = phase.scale(x0_abs + xnorm);
    let tau = T::lit(2.0) / (T::lit(2.0) * xnorm * (xnorm + x0_abs));
    Ok((v, tau, alpha))
}

/// `tau * B v` for the Hermitian trailing block `B = a[s.., s..]`, reading
/// only its lower triangle.
fn lower_matvec<T: Real, E: Entry<T>>(a: &[E], n: usize, s: usize, v: &[E], tau: T) -> Vec<E> {
    let len = n - s;
    let mut p = vec![E::zero(); len];
    for i in 0..len {
        let row = &a[(s + i) * n + s..(s + i) * n + s + i + 1];
        let vi = v[i];
        let (head, tail) = p.split_at_mut(i);
        let acc = row_dot_axpy(&row[..i], &v[..i], head, vi);
        tail[0] += acc + row[i] * vi;
    }
    p.iter().map(|z| z.scale(tau)).collect()
}

/// `Σ_j b_j x_j`, while adding `conj(b_j) * y` to `p_j`.
fn row_dot_axpy<T: Real, E: Entry<T>>(b: &[E], x: &[E], p: &mut [E], y: E) -> E {
    let mut acc = [E::zero(); 4];
    let mut bc = b.chunks_exact(4);
    let mut xc = x.chunks_exact(4);
    let mut pc = p.chunks_exact_mut(4);
    for ((b4, x4), p4) in (&mut bc).zip(&mut xc).zip(&mut pc) {
        for l in 0..4 {
            acc[l] += b4[l] * x4[l];
            p4[l] += b4[l].conj() * y;
        }
    }
    let mut tail = E::zero();
    for ((b, x), p) in bc.remainder().iter().zip(xc.remainder()).zip(pc.into_remainder()) {
        tail += *b * *x;
        *p += b.conj() * y;
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// Rank-2 update `b_j -= vi conj(w_j) + wi conj(v_j)` of one row, returning
/// `Σ_j b_j vn_j` and adding `conj(b_j) * vni` to `pn_j` with the updated
/// entries.
#[allow(clippy::too_many_arguments)]
fn fused_row<T: Real, E: Entry<T>>(
    b: &mut [E],
    vi: E,
    wi: E,
    v: &[E],
    w: &[E],
    vn: &[E],
    pn: &mut [E],
    vni: E,
) -> E {
    let mut acc = [E::zero(); 4];
    let k = b.len() / 4 * 4;
    let (b4s, b_r) = b.split_at_mut(k);
    let (pn4s, pn_r) = pn.split_at_mut(k);
    for ((((b4, p4), v4), w4), x4) in b4s
        .chunks_exact_mut(4)
        .zip(pn4s.chunks_exact_mut(4))
        .zip(v[..k].chunks_exact(4))
        .zip(w[..k].chunks_exact(4))
        .zip(vn[..k].chunks_exact(4))
    {
        for l in 0..4 {
            b4[l] -= vi * w4[l].conj() + wi * v4[l].conj();
            acc[l] += b4[l] * x4[l];
            p4[l] += b4[l].conj() * vni;
        }
    }
    let mut tail = E::zero();
    for ((((b, p), v), w), x) in b_r.iter_mut().zip(pn_r).zip(&v[k..]).zip(&w[k..]).zip(&vn[k..]) {
        *b -= vi * w.conj() + wi * v.conj();
        tail += *b * *x;
        *p += b.conj() * vni;
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// Reduces the Hermitian matrix in `a` (row-major, lower triangle used) to
/// tridiagonal form `A = Q T Q†` with Householder reflections.
///
/// The rank-2 update of each trailing block is fused with the
/// matrix-vector product of the next step, so the block is streamed once
/// per column.
fn tridiagonalize<T: Real, E: Entry<T>>(a: &mut [E], n: usize) -> Tridiagonal<T, E> {
    let mut reflectors = Vec::new();
    let mut sub = vec![E::zero(); n.saturating_sub(1)];
    let column = |a: &[E], k: usize| -> Vec<E> { (k + 1..n).map(|i| a[i * n + k]).collect() };

    let mut current = if n > 1 {
        householder::<T, E>(&column(a, 0))
    } else {
        Err(E::zero())
    };
    let mut p = match &current {
        Ok((v, tau, _)) => lower_matvec(a, n, 1, v, *tau),
        Err(_) => Vec::new(),
    };

    for k in 0..n.saturating_sub(1) {
        let start = k + 1;
        let len = n - start;
        let (v, tau, alpha) = match current {
            Err(x0) => {
                sub[k] = x0;
                if start < n - 1 {
                    current = householder(&column(a, start));
                    if let Ok((v, tau, _)) = &current {
                        p = lower_matvec(a, n, start + 1, v, *tau);
                    }
                }
                continue;
            }
            Ok(r) => r,
        };
        // w = p - (tau/2)(v† p) v
        let mut vp = E::zero();
        for i in 0..len {
            vp += v[i].conj() * p[i];
        }
        let kfac = vp.scale(tau * T::lit(0.5));
        let w: Vec<E> = (0..len).map(|i| p[i] - kfac * v[i]).collect();

        // B -= v w† + w v†, first column now so the next reflector is known
        let (v0c, w0c) = (v[0].conj(), w[0].conj());
        for i in 0..len {
            a[(start + i) * n + start] -= v[i] * w0c + w[i] * v0c;
        }
        let next = if start < n - 1 {
            householder::<T, E>(&column(a, start))
        } else {
            Err(E::zero())
        };
        let mut pn = vec![E::zero(); len.saturating_sub(1)];
        let vn: &[E] = match &next {
            Ok((vn, _, _)) => vn,
            Err(_) => &[],
        };
        for i in 1..len {
            let (vi, wi) = (v[i], w[i]);
            let row = &mut a[(start + i) * n + start + 1..(start + i) * n + start + i + 1];
            if vn.is_empty() {
                for (jj, b) in row.iter_mut().enumerate() {
                    *b -= vi * w[jj + 1].conj() + wi * v[jj + 1].conj();
                }
                continue;
            }
            let vni = vn[i - 1];
            let (off, diag) = row.split_at_mut(i - 1);
            let acc = fused_row(off, vi, wi, &v[1..i], &w[1..i], &vn[..i - 1], &mut pn[..i - 1], vni);
            let b = &mut diag[0];
            *b -= vi * w[i].conj() + wi * v[i].conj();
            pn[i - 1] += acc + *b * vni;
        }
        if let Ok((_, tau_n, _)) = &next {
            p = pn.iter().map(|z| z.scale(*tau_n)).collect();
        }
        current = next;

        sub[k] = alpha;
        reflectors.push(Reflector {
            start,
            v,
            tau: tau.to_f64_lossy(),
        });
    }

    let diag = (0..n).map(|i| a[i * n + i].real()).collect();
    Tridiagonal {
        diag,
        sub,
        reflectors,
    }
}

/// Accumulates `Q = H_0 H_1 ... ` as a dense row-major matrix.
fn form_q<T: Real, E: Entry<T>>(reflectors: &[Reflector<E>], n: usize) -> Vec<E> {
    let mut q = vec![E::zero(); n * n];
    for i in 0..n {
        q[i * n + i] = E::from_real(T::one());
    }
    let mut y = vec![E::zero(); n];
    for r in reflectors.iter().rev() {
        let s = r.start;
        let tau = T::lit(r.tau);
        for yj in y[s..].iter_mut() {
            *yj = E::zero();
        }
        for (i, vi) in r.v.iter().enumerate() {
            let vc = vi.conj();
            let row = &q[(s + i) * n + s..(s + i) * n + n];
            for (yj, qv) in y[s..].iter_mut().zip(row) {
                *yj += vc * *qv;
            }
        }
        for (i, vi) in r.v.iter().enumerate() {
            let f = vi.scale(tau);
            let row = &mut q[(s + i) * n + s..(s + i) * n + n];
            for (qv, yj) in row.iter_mut().zip(&y[s..]) {
                *qv -= f * *yj;
            }
        }
    }
    q
}

/// Implicit QL on a real symmetric tridiagonal matrix (`d` diagonal,
/// `e[i]` coupling `i` and `i+1`). When `zt` is given its rows are rotated
/// alongside, so on exit row `k` holds the eigenvector for `d[k]`.
fn tql2<T: Real>(d: &mut [T], e: &mut [T], mut zt: Option<&mut [T]>, n: usize) -> Result<(), DenseError> {
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = T::zero();
    let eps = T::epsilon();
    let two = T::lit(2.0);
    let max_iter = 60 * n.max(10);
    let mut f = T::zero();
    let mut tst1 = T::zero();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > max_iter {
                    return Err(DenseError::NoConvergence { routine: "tridiagonal QL" });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (two * e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = zt.as_deref_mut() {
                        let (lo, hi) = z.split_at_mut((i + 1) * n);
                        let zi = &mut lo[i * n..];
                        let zi1 = &mut hi[..n];
                        for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                            let hb = *b;
                            *b = s * *a + c * hb;
                            *a = c * *a - s * hb;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = T::zero();
    }
    Ok(())
}
