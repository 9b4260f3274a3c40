#![allow(dead_code)]

use num_complex::Complex;
use proptest::prelude::*;
use rankone::{ComplexVector64, HermitianMatrix64};

pub fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

fn entries(len: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), len)
}

/// Arbitrary Hermitian matrix with entries in [-3, 3] + i[-3, 3].
pub fn hermitian(dims: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = HermitianMatrix64> {
    dims.prop_flat_map(|n| {
        entries(n * n).prop_map(move |e| HermitianMatrix64::from_upper(n, |i, j| {
            let (re, im) = e[i * n + j];
            if i == j { c(re, 0.0) } else { c(re, im) }
        }))
    })
}

/// `G G*` with `G` of size `n x k`, `1 <= k <= n`, so rank-deficient inputs
/// are included.
pub fn psd(dims: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = HermitianMatrix64> {
    dims.prop_flat_map(|n| (Just(n), 1..=n)).prop_flat_map(|(n, k)| {
        entries(n * k).prop_map(move |e| gram(n, k, &e))
    })
}

/// Full-rank `G G* + delta I`.
pub fn pd(dims: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = HermitianMatrix64> {
    dims.prop_flat_map(|n| (entries(n * n), 0.05..1.0f64).prop_map(move |(e, d)| {
        let g = gram(n, n, &e);
        g.add(&HermitianMatrix64::identity(n).scale(d)).unwrap()
    }))
}

pub fn real_psd(dims: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = HermitianMatrix64> {
    dims.prop_flat_map(|n| (Just(n), 1..=n)).prop_flat_map(|(n, k)| {
        prop::collection::vec(-3.0..3.0f64, n * k)
            .prop_map(move |e| gram(n, k, &e.iter().map(|&x| (x, 0.0)).collect::<Vec<_>>()))
    })
}

/// Diagonally dominant with real or complex off-diagonals and a non-negative
/// slack on each row.
pub fn diagonally_dominant(dims: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = HermitianMatrix64> {
    dims.prop_flat_map(|n| (entries(n * n), prop::collection::vec(0.0..2.0f64, n), any::<bool>()))
        .prop_map(|(e, slack, complex)| {
            let n = slack.len();
            let off = HermitianMatrix64::from_upper(n, |i, j| {
                let (re, im) = e[i * n + j];
                if i == j { c(0.0, 0.0) } else if complex { c(re, im) } else { c(re, 0.0) }
            });
            HermitianMatrix64::from_upper(n, |i, j| {
                if i == j {
                    let r: f64 = (0..n).filter(|&k| k != i).map(|k| off.get(i, k).norm()).sum();
                    c(r + slack[i], 0.0)
                } else {
                    off.get(i, j)
                }
            })
        })
}

pub fn gram(n: usize, k: usize, e: &[(f64, f64)]) -> HermitianMatrix64 {
    let mut a = HermitianMatrix64::zeros(n);
    for col in 0..k {
        let v = ComplexVector64::new((0..n).map(|i| c(e[i * k + col].0, e[i * k + col].1)).collect());
        a.add_outer(&v, 1.0);
    }
    a
}

pub fn scale_of(a: &HermitianMatrix64) -> f64 {
    a.max_abs_entry().max(1.0)
}
