//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point field the algorithms are written against: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Default + Debug + Display + Send + Sync + 'static
{
    /// Lossless-enough conversion of a literal constant.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// `max(floor, factor * epsilon)`; keeps tolerances meaningful in single precision.
    #[inline]
    fn tol_floor(floor: f64, factor: f64) -> Self {
        Self::lit(floor).max(Self::lit(factor) * Self::epsilon())
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over a [`Real`] field.
pub type Scalar<R> = Complex<R>;

/// Neumaier-compensated sum, so that norms and costs of matrices with exactly
/// representable totals come out exact.
pub(crate) fn compensated_sum<R: Real>(xs: impl IntoIterator<Item = R>) -> R {
    let (mut s, mut c) = (R::zero(), R::zero());
    for x in xs {
        let t = s + x;
        if s.abs() >= x.abs() {
            c = c + ((s - t) + x);
        } else {
            c = c + ((x - t) + s);
        }
        s = t;
    }
    s + c
}

#[inline]
pub(crate) fn is_finite<R: Real>(z: &Complex<R>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

#[inline]
pub(crate) fn czero<R: Real>() -> Complex<R> {
    Complex::new(R::zero(), R::zero())
}

#[inline]
pub(crate) fn creal<R: Real>(x: R) -> Complex<R> {
    Complex::new(x, R::zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_exact_total() {
        let xs: Vec<f64> = [1., 0., 1., 1., 0., 1., 1., 1., 1., 1., 2., 0., 1., 1., 0., 2.].iter().map(|x| x / 14.0).collect();
        assert_ne!(xs.iter().sum::<f64>(), 1.0);
        assert_eq!(compensated_sum(xs), 1.0);
        assert_eq!(compensated_sum([1e16, 1.0, -1e16]), 1.0);
        assert_eq!(compensated_sum(Vec::<f32>::new()), 0.0);
    }
}
