use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hermitian::ComplexVector;
use crate::scalar::{creal, czero, is_finite, Real};
use crate::tolerance::Tolerances;

/// Dense complex Hermitian matrix stored row-major.
///
/// Every constructor leaves `a[i][j] == conj(a[j][i])` bit-for-bit and a real
/// diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix<R> {
    n: usize,
    data: Vec<Complex<R>>,
}

impl<R: Real> HermitianMatrix<R> {
    /// Validates and symmetrizes a raw square array: returns `(raw + raw*) / 2`
    /// provided every `|raw[i][j] - conj(raw[j][i])|` is within `hermitian_tol`.
    pub fn ingest(raw: &[Vec<Complex<R>>], hermitian_tol: R) -> Result<Self> {
        let n = raw.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        for (row, r) in raw.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare { rows: n, row, cols: r.len() });
            }
            for (col, z) in r.iter().enumerate() {
                if !is_finite(z) {
                    return Err(Error::NonFinite { row, col });
                }
            }
        }
        let mut worst = (0, 0, R::zero());
        for i in 0..n {
            for j in i..n {
                let dev = (raw[i][j] - raw[j][i].conj()).norm();
                if dev > worst.2 {
                    worst = (i, j, dev);
                }
            }
        }
        if worst.2 > hermitian_tol {
            return Err(Error::NotHermitian { row: worst.0, col: worst.1, deviation: worst.2.as_f64() });
        }
        let half = R::lit(0.5);
        Ok(Self::from_upper(n, |i, j| {
            if i == j {
                creal(raw[i][i].re)
            } else {
                (raw[i][j] + raw[j][i].conj()) * half
            }
        }))
    }

    /// Real square rows, checked with the default Hermitian tolerance.
    pub fn from_real_rows(rows: &[Vec<R>]) -> Result<Self> {
        let raw: Vec<Vec<Complex<R>>> =
            rows.iter().map(|r| r.iter().map(|&x| creal(x)).collect()).collect();
        Self::ingest(&raw, Tolerances::<R>::default().hermitian)
    }

    /// Complex square rows, checked with the default Hermitian tolerance.
    pub fn from_complex_rows(rows: &[Vec<Complex<R>>]) -> Result<Self> {
        Self::ingest(rows, Tolerances::<R>::default().hermitian)
    }

    /// Builds from a function of the upper triangle (`i <= j`); the lower
    /// triangle is filled by conjugation.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> Complex<R>) -> Self {
        let mut data = vec![czero(); n * n];
        for i in 0..n {
            data[i * n + i] = creal(f(i, i).re);
            for j in (i + 1)..n {
                let z = f(i, j);
                data[i * n + j] = z;
                data[j * n + i] = z.conj();
            }
        }
        HermitianMatrix { n, data }
    }

    pub fn zeros(n: usize) -> Self {
        HermitianMatrix { n, data: vec![czero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![R::one(); n])
    }

    pub fn diagonal(d: &[R]) -> Self {
        let n = d.len();
        Self::from_upper(n, |i, j| if i == j { creal(d[i]) } else { czero() })
    }

    /// `v v*`.
    pub fn outer(v: &ComplexVector<R>) -> Self {
        let mut m = Self::zeros(v.len());
        m.add_outer(v, R::one());
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<R> {
        self.data[i * self.n + j]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex<R>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex<R>] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> ComplexVector<R> {
        ComplexVector::new((0..self.n).map(|i| self.get(i, j)).collect())
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex<R>>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn diag(&self) -> Vec<R> {
        (0..self.n).map(|i| self.get(i, i).re).collect()
    }

    pub fn trace(&self) -> R {
        self.diag().into_iter().sum()
    }

    pub fn max_abs_entry(&self) -> R {
        self.data.iter().fold(R::zero(), |m, z| m.max(z.norm()))
    }

    pub fn max_diag(&self) -> R {
        self.diag().into_iter().fold(R::zero(), |m, d| m.max(d.abs()))
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == R::zero())
    }

    /// `self += w * v v*`, preserving exact Hermitian symmetry.
    pub fn add_outer(&mut self, v: &ComplexVector<R>, w: R) {
        let n = self.n;
        debug_assert_eq!(v.len(), n);
        for i in 0..n {
            let vi = v[i] * w;
            self.data[i * n + i].re = self.data[i * n + i].re + (v[i].norm_sqr() * w);
            for j in (i + 1)..n {
                let z = vi * v[j].conj();
                self.data[i * n + j] = self.data[i * n + j] + z;
                self.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
    }

    /// `self -= v v*`.
    pub fn sub_outer(&mut self, v: &ComplexVector<R>) {
        self.add_outer(v, -R::one());
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.n)?;
        Ok(Self::from_upper(self.n, |i, j| self.get(i, j) + other.get(i, j)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.n)?;
        Ok(Self::from_upper(self.n, |i, j| self.get(i, j) - other.get(i, j)))
    }

    pub fn scale(&self, s: R) -> Self {
        Self::from_upper(self.n, |i, j| self.get(i, j) * s)
    }

    /// Principal submatrix on `idx` (in the given order).
    pub fn submatrix(&self, idx: &[usize]) -> Self {
        Self::from_upper(idx.len(), |a, b| self.get(idx[a], idx[b]))
    }

    pub fn mul_vec(&self, x: &ComplexVector<R>) -> ComplexVector<R> {
        let n = self.n;
        ComplexVector::new(
            (0..n)
                .map(|i| self.row(i).iter().zip(x.iter()).fold(czero(), |acc, (a, b)| acc + a * b))
                .collect(),
        )
    }

    /// Real part of `x* A x` (the imaginary part vanishes for Hermitian `A`).
    pub fn quad_form(&self, x: &ComplexVector<R>) -> R {
        self.mul_vec(x).inner(x).re
    }

    /// Sets `a[i][j] = z` and `a[j][i] = conj(z)` (real part only on the diagonal).
    pub(crate) fn set_pair(&mut self, i: usize, j: usize, z: Complex<R>) {
        let n = self.n;
        if i == j {
            self.data[i * n + i] = creal(z.re);
        } else {
            self.data[i * n + j] = z;
            self.data[j * n + i] = z.conj();
        }
    }

    pub(crate) fn check_dim(&self, m: usize) -> Result<()> {
        if self.n != m {
            return Err(Error::DimensionMismatch { expected: self.n, found: m });
        }
        Ok(())
    }

    /// Largest absolute entry difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<R> {
        self.check_dim(other.n)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(R::zero(), |m, (a, b)| m.max((a - b).norm())))
    }

    /// `sum_{k,l} |A_kl|`.
    pub fn norm_l11(&self) -> R {
        crate::scalar::compensated_sum(self.data.iter().map(|z| z.norm()))
    }

    /// `sqrt(sum_{k,l} |A_kl|^2)`.
    pub fn frobenius_norm(&self) -> R {
        self.data.iter().map(|z| z.norm_sqr()).sum::<R>().sqrt()
    }
}
