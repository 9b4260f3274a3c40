//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot entry `a_pq` with a
//! diagonal unitary, then applies the real symmetric Jacobi rotation that
//! annihilates it. Accumulating the products gives the eigenvectors.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hermitian::{ComplexVector, HermitianMatrix};
use crate::scalar::{creal, czero, Real};
use crate::tolerance::Tolerances;

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
///
/// Each eigenvector is unit length and its first coordinate of non-negligible
/// modulus is real and positive, which pins down every downstream cost.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem<R> {
    pub eigenvalues: Vec<R>,
    pub eigenvectors: Vec<ComplexVector<R>>,
}

impl<R: Real> EigenSystem<R> {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn min_eigenvalue(&self) -> R {
        self.eigenvalues.first().copied().unwrap_or_else(R::zero)
    }

    pub fn max_abs_eigenvalue(&self) -> R {
        self.eigenvalues.iter().fold(R::zero(), |m, l| m.max(l.abs()))
    }

    /// `sum_k lambda_k v_k v_k*`.
    pub fn reconstruct(&self) -> HermitianMatrix<R> {
        let n = self.eigenvectors.first().map_or(0, |v| v.len());
        let mut m = HermitianMatrix::zeros(n);
        for (l, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            m.add_outer(v, *l);
        }
        m
    }

    pub fn pairs(&self) -> impl Iterator<Item = (R, &ComplexVector<R>)> {
        self.eigenvalues.iter().copied().zip(self.eigenvectors.iter())
    }
}

impl<R: Real> HermitianMatrix<R> {
    /// Eigendecomposition with the default tolerances.
    pub fn eigh(&self) -> Result<EigenSystem<R>> {
        self.eigh_with(&Tolerances::default())
    }

    /// Cyclic Jacobi sweeps until the off-diagonal Frobenius mass drops below
    /// `tol.eig_off * ||A||_Fr`; fails after `tol.eig_sweeps` sweeps.
    pub fn eigh_with(&self, tol: &Tolerances<R>) -> Result<EigenSystem<R>> {
        let n = self.n();
        let mut a: Vec<Complex<R>> = self.entries().to_vec();
        let mut v: Vec<Complex<R>> = vec![czero(); n * n];
        for i in 0..n {
            v[i * n + i] = creal(R::one());
        }
        let threshold = tol.eig_off * self.frobenius_norm();
        let two = R::lit(2.0);

        let mut converged = false;
        let mut off = R::zero();
        for _ in 0..=tol.eig_sweeps {
            off = off_diagonal_mass(&a, n);
            if off <= threshold {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[p * n + q];
                    let r = apq.norm();
                    if r == R::zero() {
                        continue;
                    }
                    let phase = apq / r;
                    let app = a[p * n + p].re;
                    let aqq = a[q * n + q].re;
                    let tau = (aqq - app) / (two * r);
                    let t = if tau >= R::zero() {
                        R::one() / (tau + (R::one() + tau * tau).sqrt())
                    } else {
                        -R::one() / (-tau + (R::one() + tau * tau).sqrt())
                    };
                    let c = R::one() / (R::one() + t * t).sqrt();
                    let s = t * c;
                    // W = diag(1, conj(phase)) * [[c, s], [-s, c]] acting on (p, q).
                    let wqp = -phase.conj() * s;
                    let wqq = phase.conj() * c;
                    for k in 0..n {
                        let akp = a[k * n + p];
                        let akq = a[k * n + q];
                        a[k * n + p] = akp * c + akq * wqp;
                        a[k * n + q] = akp * s + akq * wqq;
                    }
                    for k in 0..n {
                        let apk = a[p * n + k];
                        let aqk = a[q * n + k];
                        a[p * n + k] = apk * c + aqk * wqp.conj();
                        a[q * n + k] = apk * s + aqk * wqq.conj();
                    }
                    a[p * n + q] = czero();
                    a[q * n + p] = czero();
                    a[p * n + p].im = R::zero();
                    a[q * n + q].im = R::zero();
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = vkp * c + vkq * wqp;
                        v[k * n + q] = vkp * s + vkq * wqq;
                    }
                }
            }
        }
        if !converged {
            return Err(Error::EigenFailure { sweeps: tol.eig_sweeps, off: off.as_f64() });
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| {
            a[i * n + i].re.partial_cmp(&a[j * n + j].re).unwrap_or(std::cmp::Ordering::Equal)
        });
        let phase_floor = R::tol_floor(1e-10, 1e3);
        let eigenvalues = order.iter().map(|&i| a[i * n + i].re).collect();
        let eigenvectors = order
            .iter()
            .map(|&col| {
                let mut vec = ComplexVector::new((0..n).map(|k| v[k * n + col]).collect());
                normalize_phase(&mut vec, phase_floor);
                vec
            })
            .collect();
        Ok(EigenSystem { eigenvalues, eigenvectors })
    }

    /// `sum_k |lambda_k|`.
    pub fn trace_norm(&self) -> Result<R> {
        Ok(self.eigh()?.eigenvalues.iter().map(|l| l.abs()).sum())
    }

    /// `max_k |lambda_k|`.
    pub fn operator_norm(&self) -> Result<R> {
        Ok(self.eigh()?.max_abs_eigenvalue())
    }

    /// `lambda_min >= -psd_tol * max(1, ||A||_op)`.
    pub fn is_psd(&self, psd_tol: R) -> Result<bool> {
        let eig = self.eigh()?;
        Ok(eig_is_psd(&eig, psd_tol))
    }

    /// Count of eigenvalues above `rank_tol * ||A||_op`.
    pub fn numerical_rank(&self, rank_tol: R) -> Result<usize> {
        Ok(rank_of(&self.eigh()?, rank_tol))
    }
}

pub(crate) fn eig_is_psd<R: Real>(eig: &EigenSystem<R>, psd_tol: R) -> bool {
    eig.min_eigenvalue() >= -psd_tol * R::one().max(eig.max_abs_eigenvalue())
}

pub(crate) fn rank_of<R: Real>(eig: &EigenSystem<R>, rank_tol: R) -> usize {
    let cut = rank_tol * eig.max_abs_eigenvalue();
    eig.eigenvalues.iter().filter(|&&l| l > cut).count()
}

fn off_diagonal_mass<R: Real>(a: &[Complex<R>], n: usize) -> R {
    let mut s = R::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s = s + a[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn normalize_phase<R: Real>(v: &mut ComplexVector<R>, floor: R) {
    let norm = v.l2_norm();
    if norm == R::zero() {
        return;
    }
    let Some(lead) = v.iter().position(|z| z.norm() > floor * norm) else {
        return;
    };
    let z = v[lead];
    let rot = z.conj() / (z.norm() * norm);
    for c in v.coords_mut() {
        *c = *c * rot;
    }
    v[lead].im = R::zero();
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn real(rows: &[Vec<f64>]) -> HermitianMatrix<f64> {
        HermitianMatrix::from_real_rows(rows).unwrap()
    }

    fn check_invariants(a: &HermitianMatrix<f64>, eig: &EigenSystem<f64>) {
        let op = a.operator_norm().unwrap().max(1.0);
        for (l, v) in eig.pairs() {
            let av = a.mul_vec(v);
            let res: f64 = av.iter().zip(v.iter()).map(|(x, y)| (x - y * l).norm_sqr()).sum::<f64>().sqrt();
            assert!(res <= 1e-10 * op, "residual {res}");
        }
        for (j, vj) in eig.eigenvectors.iter().enumerate() {
            for (k, vk) in eig.eigenvectors.iter().enumerate() {
                let expect = if j == k { 1.0 } else { 0.0 };
                assert!((vj.inner(vk) - Complex::new(expect, 0.0)).norm() < 1e-10);
            }
        }
        assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn diagonal_input_sorts_ascending() {
        let a = HermitianMatrix::diagonal(&[3.0, 1.0]);
        let eig = a.eigh().unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0, 3.0]);
        assert_eq!(eig.eigenvectors[0], ComplexVector::basis(2, 1));
        assert_eq!(eig.eigenvectors[1], ComplexVector::basis(2, 0));
    }

    #[test]
    fn two_by_two_symmetric() {
        let a = real(&[vec![2., 1.], vec![1., 2.]]);
        let eig = a.eigh().unwrap();
        assert_abs_diff_eq!(eig.eigenvalues[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(eig.eigenvalues[1], 3.0, epsilon = 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v0 = &eig.eigenvectors[0];
        let v1 = &eig.eigenvectors[1];
        assert_abs_diff_eq!(v0[0].re, h, epsilon = 1e-14);
        assert_abs_diff_eq!(v0[1].re, -h, epsilon = 1e-14);
        assert_abs_diff_eq!(v1[0].re, h, epsilon = 1e-14);
        assert_abs_diff_eq!(v1[1].re, h, epsilon = 1e-14);
        check_invariants(&a, &eig);
    }

    #[test]
    fn purely_imaginary_off_diagonal() {
        let a = HermitianMatrix::from_complex_rows(&[
            vec![Complex::new(0., 0.), Complex::new(0., 1.)],
            vec![Complex::new(0., -1.), Complex::new(0., 0.)],
        ])
        .unwrap();
        let eig = a.eigh().unwrap();
        assert_abs_diff_eq!(eig.eigenvalues[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(eig.eigenvalues[1], 1.0, epsilon = 1e-14);
        check_invariants(&a, &eig);
        for v in &eig.eigenvectors {
            assert_eq!(v[0].im, 0.0);
            assert!(v[0].re > 0.0);
        }
    }

    #[test]
    fn spectral_norms_of_small_examples() {
        let swap = real(&[vec![0., 1.], vec![1., 0.]]);
        assert_abs_diff_eq!(swap.trace_norm().unwrap(), 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(swap.operator_norm().unwrap(), 1.0, epsilon = 1e-14);
        let i3 = HermitianMatrix::<f64>::identity(3);
        assert_eq!(i3.trace_norm().unwrap(), 3.0);
        assert_eq!(i3.operator_norm().unwrap(), 1.0);
        let a = real(&[vec![2., 1.], vec![1., 2.]]);
        assert_abs_diff_eq!(a.trace_norm().unwrap(), 4.0, epsilon = 1e-14);
        assert_abs_diff_eq!(a.operator_norm().unwrap(), 3.0, epsilon = 1e-14);
    }

    #[test]
    fn psd_test_examples() {
        assert!(real(&[vec![2., 1.], vec![1., 2.]]).is_psd(1e-10).unwrap());
        assert!(!real(&[vec![0., 1.], vec![1., 0.]]).is_psd(1e-10).unwrap());
        assert!(HermitianMatrix::<f64>::zeros(3).is_psd(1e-10).unwrap());
    }

    #[test]
    fn zero_matrix_converges_immediately() {
        let eig = HermitianMatrix::<f64>::zeros(4).eigh().unwrap();
        assert_eq!(eig.eigenvalues, vec![0.0; 4]);
    }

    #[test]
    fn sweep_cap_is_reported() {
        let a = real(&[vec![1., 2., 3.], vec![2., 5., 7.], vec![3., 7., 1.]]);
        let tol = Tolerances { eig_sweeps: 1, eig_off: 1e-300, ..Default::default() };
        assert!(matches!(a.eigh_with(&tol), Err(Error::EigenFailure { sweeps: 1, .. })));
    }

    #[test]
    fn single_precision_solver() {
        let a = HermitianMatrix::<f32>::from_real_rows(&[vec![2., 1.], vec![1., 2.]]).unwrap();
        let eig = a.eigh().unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-5);
        assert!((eig.eigenvalues[1] - 3.0).abs() < 1e-5);
    }

    #[test]
    fn rank_of_outer_product() {
        let u = ComplexVector::new(vec![Complex::new(1.0, 0.5), Complex::new(-2.0, 0.0), Complex::new(0.0, 1.0)]);
        let a = HermitianMatrix::outer(&u);
        assert_eq!(a.numerical_rank(1e-8).unwrap(), 1);
    }
}
