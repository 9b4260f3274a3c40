//! Outer-product LDL (Lagrangian) elimination in natural pivot order.

use crate::error::{Error, Result};
use crate::hermitian::{ComplexVector, HermitianMatrix};
use crate::scalar::{creal, czero, Real};

/// Factors a PSD matrix as `sum_k v_k v_k*`.
///
/// Step `k` takes the current Schur complement `S` and, when `S_kk` exceeds
/// `pivot_tol * max(1, max_i A_ii)`, emits `v = S[:, k] / sqrt(S_kk)` (zero
/// above position `k`) and subtracts `v v*`. A sub-threshold pivot is skipped
/// and emits nothing; PSD structure forces the rest of its row to vanish,
/// which is checked against `sqrt(pivot_tol) * scale`.
pub fn ldl_factor<R: Real>(a: &HermitianMatrix<R>, pivot_tol: R) -> Result<Vec<ComplexVector<R>>> {
    let order: Vec<usize> = (0..a.n()).collect();
    ldl_factor_ordered(a, &order, pivot_tol)
}

/// Same elimination with pivots taken in `order` (a permutation of `0..n`).
/// Emitted vectors vanish on every index pivoted before them.
pub fn ldl_factor_ordered<R: Real>(
    a: &HermitianMatrix<R>,
    order: &[usize],
    pivot_tol: R,
) -> Result<Vec<ComplexVector<R>>> {
    let n = a.n();
    if order.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: order.len() });
    }
    let scale = R::one().max(a.max_diag());
    let pivot_cut = pivot_tol * scale;
    let row_cut = pivot_tol.sqrt() * scale;
    let mut s = a.clone();
    let mut done = vec![false; n];
    let mut out = Vec::with_capacity(n);
    for &k in order {
        done[k] = true;
        let d = s.get(k, k).re;
        if d <= pivot_cut {
            if d < -row_cut {
                return Err(Error::NotPsd {
                    detail: format!("Schur complement pivot {k} is {:e}", d.as_f64()),
                });
            }
            let worst = (0..n)
                .filter(|&j| !done[j])
                .map(|j| s.get(k, j).norm())
                .fold(R::zero(), R::max);
            if worst > row_cut {
                return Err(Error::NotPsd {
                    detail: format!("zero pivot {k} has off-diagonal mass {:e}", worst.as_f64()),
                });
            }
            continue;
        }
        let root = d.sqrt();
        let mut v = ComplexVector::zeros(n);
        v[k] = creal(root);
        for j in (0..n).filter(|&j| !done[j]) {
            v[j] = s.get(j, k) / root;
        }
        s.sub_outer(&v);
        // the pivot row/column is eliminated exactly
        for j in 0..n {
            s.set_pair(k, j, czero());
        }
        out.push(v);
    }
    Ok(out)
}

/// `sum_k g_k g_k*`.
pub fn reconstruct<R: Real>(n: usize, vectors: &[ComplexVector<R>]) -> Result<HermitianMatrix<R>> {
    let mut m = HermitianMatrix::zeros(n);
    for v in vectors {
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
        m.add_outer(v, R::one());
    }
    Ok(m)
}

/// Result of comparing a target against a reconstruction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport<R> {
    /// `max_ij |A_ij - (sum_k g_k g_k*)_ij|`.
    pub residual: R,
    /// `recon_tol * max(1, max_ij |A_ij|)`.
    pub tolerance: R,
    pub pass: bool,
}

pub fn verify_reconstruction<R: Real>(
    a: &HermitianMatrix<R>,
    vectors: &[ComplexVector<R>],
    recon_tol: R,
) -> Result<ResidualReport<R>> {
    let m = reconstruct(a.n(), vectors)?;
    Ok(residual_report(a, &m, recon_tol))
}

pub(crate) fn residual_report<R: Real>(
    a: &HermitianMatrix<R>,
    m: &HermitianMatrix<R>,
    recon_tol: R,
) -> ResidualReport<R> {
    let residual = a.max_abs_diff(m).unwrap_or_else(|_| R::infinity());
    let tolerance = recon_tol * R::one().max(a.max_abs_entry());
    ResidualReport { residual, tolerance, pass: residual <= tolerance }
}
