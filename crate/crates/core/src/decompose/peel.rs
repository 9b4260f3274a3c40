use crate::error::{Error, Result};
use crate::hermitian::{ComplexVector, HermitianMatrix};
use crate::scalar::Real;

/// One rank-one subtraction `A -> A - y y*` with `y = A x`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeelStep<R> {
    pub x: ComplexVector<R>,
    pub y: ComplexVector<R>,
    /// `<Ax, x>`.
    pub quad: R,
}

/// Peels `y = A x` off a PSD matrix. The residual `A - y y*` stays PSD
/// whenever `<Ax, x> <= 1`, and loses one rank when `<Ax, x> = 1`.
pub fn rank_one_peel<R: Real>(
    a: &HermitianMatrix<R>,
    x: &ComplexVector<R>,
) -> Result<(PeelStep<R>, HermitianMatrix<R>)> {
    a.check_dim(x.len())?;
    let y = a.mul_vec(x);
    let quad = y.inner(x).re;
    if quad > R::one() + R::lit(1e-12).max(R::lit(4.0) * R::epsilon()) {
        return Err(Error::QuadFormTooLarge { quad: quad.as_f64() });
    }
    let floor = R::epsilon() * R::one().max(a.max_abs_entry()) * x.l2_norm();
    if y.l2_norm() <= floor || quad <= R::zero() {
        return Err(Error::ZeroDirection);
    }
    let mut residual = a.clone();
    residual.sub_outer(&y);
    Ok((PeelStep { x: x.clone(), y, quad }, residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identity_peel_drops_rank() {
        let a = HermitianMatrix::<f64>::identity(2);
        let (step, res) = rank_one_peel(&a, &ComplexVector::basis(2, 0)).unwrap();
        assert_eq!(step.y, ComplexVector::from_real(&[1., 0.]));
        assert_eq!(res, HermitianMatrix::diagonal(&[0., 1.]));
        assert_eq!(a.numerical_rank(1e-8).unwrap(), 2);
        assert_eq!(res.numerical_rank(1e-8).unwrap(), 1);
    }

    #[test]
    fn first_ldl_step_as_peel() {
        let a = HermitianMatrix::from_real_rows(&[vec![2., 1.], vec![1., 2.]]).unwrap();
        let x = ComplexVector::basis(2, 0).scale(0.5f64.sqrt());
        let (step, res) = rank_one_peel(&a, &x).unwrap();
        assert_abs_diff_eq!(step.quad, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(step.y[0].re, 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(step.y[1].re, 0.5f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(res.get(0, 0).re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(res.get(0, 1).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(res.get(1, 1).re, 1.5, epsilon = 1e-15);
    }

    #[test]
    fn oversized_direction_is_rejected() {
        let a = HermitianMatrix::<f64>::identity(2);
        let x = ComplexVector::from_real(&[1., 1.]);
        match rank_one_peel(&a, &x) {
            Err(Error::QuadFormTooLarge { quad }) => assert_eq!(quad, 2.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn null_direction_is_rejected() {
        let a = HermitianMatrix::<f64>::diagonal(&[1., 0.]);
        assert!(matches!(rank_one_peel(&a, &ComplexVector::basis(2, 1)), Err(Error::ZeroDirection)));
    }
}
