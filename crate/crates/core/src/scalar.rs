//! Scalar abstraction shared by every numerical module.
//!
//! All operator and distribution code is generic over [`Real`]; the crate
//! root exports `f64` aliases for the common case.

use std::fmt::{Debug, Display};

use nalgebra::{DMatrix, RealField};
use num_complex::Complex;
use num_traits::ToPrimitive;

/// Real field usable as the scalar of the operator algebra.
///
/// `TOL_SCALE` stretches the absolute tolerances (which are stated for
/// double precision) to something meaningful for the given precision.
pub trait Real: RealField + Copy + ToPrimitive + Display + Debug + Send + Sync + 'static {
    const TOL_SCALE: f64;

    #[inline]
    fn lit(x: f64) -> Self {
        nalgebra::convert(x)
    }

    #[inline]
    fn tol(base: f64) -> Self {
        Self::lit(base * Self::TOL_SCALE)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn count(n: usize) -> Self {
        Self::lit(n as f64)
    }
}

impl Real for f64 {
    const TOL_SCALE: f64 = 1.0;
}

impl Real for f32 {
    const TOL_SCALE: f64 = 1e5;
}

pub type C<R> = Complex<R>;
pub type Mat<R> = DMatrix<Complex<R>>;

#[inline]
pub(crate) fn c<R: Real>(re: R) -> C<R> {
    Complex::new(re, R::zero())
}

#[inline]
pub(crate) fn cis<R: Real>(angle: R) -> C<R> {
    Complex::new(angle.cos(), angle.sin())
}

/// Largest entry modulus of a matrix.
pub fn max_abs<R: Real>(m: &Mat<R>) -> R {
    m.iter().fold(R::zero(), |acc, z| acc.max(nalgebra::ComplexField::modulus(*z)))
}
