//! Scalar abstraction shared by every module.
//!
//! All numerics are written against [`Real`] so the same code runs in `f32`
//! or `f64`. The tolerances quoted throughout the crate are calibrated for
//! `f64`; `f32` builds are useful for smoke tests only.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use rustfft::FftNum;

/// Real floating point type the library computes in.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + FftNum + Display + Debug + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal into this type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    /// Converts an integer count into this type.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex scalar over `T`.
pub type Cx<T> = Complex<T>;

#[inline]
pub(crate) fn cx<T: Real>(re: T, im: T) -> Cx<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn zero<T: Real>() -> Cx<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub(crate) fn one<T: Real>() -> Cx<T> {
    Complex::new(T::one(), T::zero())
}

#[inline]
pub(crate) fn is_finite<T: Real>(z: Cx<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Integer power by repeated squaring; negative exponents invert.
pub fn powi<T: Real>(z: Cx<T>, n: i32) -> Cx<T> {
    if n < 0 {
        return one::<T>() / powi(z, -n);
    }
    let mut base = z;
    let mut exp = n as u32;
    let mut acc = one::<T>();
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= base;
        }
        base = base * base;
        exp >>= 1;
    }
    acc
}

/// Total order on complex numbers by (real, imaginary) part.
pub(crate) fn cmp_re_im<T: Real>(a: &Cx<T>, b: &Cx<T>) -> std::cmp::Ordering {
    a.re
        .partial_cmp(&b.re)
        .unwrap_or(std::cmp::Ordering::Equal)
        .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
}

/// Formats a complex number as `a`, `a+bi` or `a-bi`.
pub fn format_complex<T: Real>(z: Cx<T>) -> String {
    let re = if z.re == T::zero() { T::zero() } else { z.re };
    if z.im == T::zero() {
        format!("{re}")
    } else if z.im < T::zero() {
        format!("{re}-{}i", -z.im)
    } else {
        format!("{re}+{}i", z.im)
    }
}
