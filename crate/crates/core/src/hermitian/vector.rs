use std::ops::{Index, IndexMut};

use num_complex::Complex;

use crate::scalar::{czero, Real};

/// Dense complex n-vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector<R> {
    coords: Vec<Complex<R>>,
}

impl<R: Real> ComplexVector<R> {
    pub fn new(coords: Vec<Complex<R>>) -> Self {
        ComplexVector { coords }
    }

    pub fn zeros(n: usize) -> Self {
        ComplexVector { coords: vec![czero(); n] }
    }

    pub fn from_real(xs: &[R]) -> Self {
        ComplexVector { coords: xs.iter().map(|&x| Complex::new(x, R::zero())).collect() }
    }

    /// Standard basis vector `e_i` of length `n`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.coords[i] = Complex::new(R::one(), R::zero());
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[Complex<R>] {
        &self.coords
    }

    pub fn coords_mut(&mut self) -> &mut [Complex<R>] {
        &mut self.coords
    }

    pub fn into_coords(self) -> Vec<Complex<R>> {
        self.coords
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex<R>> {
        self.coords.iter()
    }

    pub fn l1_norm(&self) -> R {
        self.coords.iter().map(|z| z.norm()).sum()
    }

    pub fn l2_norm(&self) -> R {
        self.coords.iter().map(|z| z.norm_sqr()).sum::<R>().sqrt()
    }

    pub fn linf_norm(&self) -> R {
        self.coords.iter().fold(R::zero(), |m, z| m.max(z.norm()))
    }

    /// Inner product `<self, other> = sum_i self_i * conj(other_i)`.
    pub fn inner(&self, other: &Self) -> Complex<R> {
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(czero(), |acc, (a, b)| acc + a * b.conj())
    }

    pub fn scale(&self, s: R) -> Self {
        ComplexVector { coords: self.coords.iter().map(|z| z * s).collect() }
    }

    pub fn scale_complex(&self, s: Complex<R>) -> Self {
        ComplexVector { coords: self.coords.iter().map(|z| z * s).collect() }
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(crate::scalar::is_finite)
    }

    /// Indices whose modulus exceeds `threshold`.
    pub fn support(&self, threshold: R) -> Vec<usize> {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, z)| z.norm() > threshold)
            .map(|(i, _)| i)
            .collect()
    }

    /// Lexicographic comparison on (re, im) pairs; used for deterministic tie breaks.
    pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        for (a, b) in self.coords.iter().zip(&other.coords) {
            let ord = a
                .re
                .partial_cmp(&b.re)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal));
            if ord.is_ne() {
                return ord;
            }
        }
        self.len().cmp(&other.len())
    }
}

impl<R> Index<usize> for ComplexVector<R> {
    type Output = Complex<R>;
    fn index(&self, i: usize) -> &Complex<R> {
        &self.coords[i]
    }
}

impl<R> IndexMut<usize> for ComplexVector<R> {
    fn index_mut(&mut self, i: usize) -> &mut Complex<R> {
        &mut self.coords[i]
    }
}

impl<R: Real> From<Vec<Complex<R>>> for ComplexVector<R> {
    fn from(coords: Vec<Complex<R>>) -> Self {
        Self::new(coords)
    }
}
