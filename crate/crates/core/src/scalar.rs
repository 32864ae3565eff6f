//! Scalar abstractions shared by every numerical routine in the crate.
//!
//! All kernels are written against [`Real`] and operate on `Complex<T>`
//! entries. Concrete `f64` and `f32` aliases live at the crate root.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point scalar usable by the dense kernels.
pub trait Real:
    Float
    + FloatConst
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Smallest tolerance that is meaningful at this precision. Tolerances
    /// written for `f64` are raised to this floor for narrower types.
    const TOL_FLOOR: f64;

    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Converts an `f64` tolerance, clamped to [`Real::TOL_FLOOR`].
    #[inline]
    fn tol(x: f64) -> Self {
        Self::lit(x.max(Self::TOL_FLOOR))
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const TOL_FLOOR: f64 = 0.0;
}

impl Real for f32 {
    const TOL_FLOOR: f64 = 1e-5;
}

/// Field element used inside the factorization kernels: either a real
/// scalar or a complex number over it. Lets the Householder/QL path run in
/// pure real arithmetic when the input has no imaginary part.
pub trait Entry<T: Real>:
    Copy
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + 'static
{
    fn zero() -> Self;
    fn from_real(x: T) -> Self;
    fn conj(self) -> Self;
    fn norm_sqr(self) -> T;
    fn real(self) -> T;
    fn scale(self, s: T) -> Self;
    fn to_complex(self) -> Complex<T>;

    #[inline]
    fn modulus(self) -> T {
        self.norm_sqr().sqrt()
    }
}

impl<T: Real> Entry<T> for T {
    #[inline]
    fn zero() -> Self {
        T::zero()
    }
    #[inline]
    fn from_real(x: T) -> Self {
        x
    }
    #[inline]
    fn conj(self) -> Self {
        self
    }
    #[inline]
    fn norm_sqr(self) -> T {
        self * self
    }
    #[inline]
    fn real(self) -> T {
        self
    }
    #[inline]
    fn scale(self, s: T) -> Self {
        self * s
    }
    #[inline]
    fn to_complex(self) -> Complex<T> {
        Complex::new(self, T::zero())
    }
    #[inline]
    fn modulus(self) -> T {
        self.abs()
    }
}

impl<T: Real> Entry<T> for Complex<T> {
    #[inline]
    fn zero() -> Self {
        Complex::new(T::zero(), T::zero())
    }
    #[inline]
    fn from_real(x: T) -> Self {
        Complex::new(x, T::zero())
    }
    #[inline]
    fn conj(self) -> Self {
        Complex::conj(&self)
    }
    #[inline]
    fn norm_sqr(self) -> T {
        Complex::norm_sqr(&self)
    }
    #[inline]
    fn real(self) -> T {
        self.re
    }
    #[inline]
    fn scale(self, s: T) -> Self {
        Complex::new(self.re * s, self.im * s)
    }
    #[inline]
    fn to_complex(self) -> Complex<T> {
        self
    }
}

/// Complex constant helper.
#[inline]
pub fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

/// Base-2 logarithm contribution `-x log2 x`, zero for `x <= cutoff`.
#[inline]
pub fn xlog2x_neg<T: Real>(x: T, cutoff: T) -> T {
    if x <= cutoff {
        T::zero()
    } else {
        -x * x.log2()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_floor_applies_only_to_narrow_types() {
        assert_eq!(f64::tol(1e-12), 1e-12);
        assert_eq!(f32::tol(1e-12), 1e-5_f32);
    }

    #[test]
    fn entry_impls_agree_on_real_inputs() {
        let x = 1.5_f64;
        let z = Complex::new(1.5_f64, 0.0);
        assert_eq!(Entry::<f64>::norm_sqr(x), Entry::<f64>::norm_sqr(z));
        assert_eq!(Entry::<f64>::conj(z), z);
        assert_eq!(Entry::<f64>::to_complex(x), z);
    }
}
