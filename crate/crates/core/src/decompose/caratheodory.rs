//! Shrinks a convex combination `sum_k w_k x_k x_k*` of unit-l1 rank-one
//! terms to at most `n^2 + 1` terms without changing the matrix or the total
//! weight.
//!
//! Hermitian `n x n` matrices form a real vector space of dimension `n^2`.
//! Appending the weight coordinate gives `n^2 + 1` linear conditions, so any
//! `n^2 + 2` terms admit a non-zero `lambda` with
//! `sum_k lambda_k (x_k x_k*, 1) = 0`. Moving the weights along `lambda`
//! until one of them reaches zero removes a term.

use crate::decompose::{Method, RankOneDecomposition};
use crate::error::{Error, Result};
use crate::hermitian::ComplexVector;
use crate::scalar::Real;

/// Returns `(weights, vectors)` with at most `n^2 + 1` terms.
///
/// Requires `w_k > 0`, `sum_k w_k <= 1` and `||x_k||_1 = 1` (within `1e-9`).
pub fn caratheodory_reduce<R: Real>(
    weights: &[R],
    unit_vectors: &[ComplexVector<R>],
) -> Result<(Vec<R>, Vec<ComplexVector<R>>)> {
    if weights.len() != unit_vectors.len() {
        return Err(Error::DimensionMismatch { expected: weights.len(), found: unit_vectors.len() });
    }
    let Some(n) = unit_vectors.first().map(|v| v.len()) else {
        return Ok((Vec::new(), Vec::new()));
    };
    let norm_tol = R::tol_floor(1e-9, 1e3);
    for (k, (w, x)) in weights.iter().zip(unit_vectors).enumerate() {
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: x.len() });
        }
        if !(*w > R::zero()) || !w.is_finite() {
            return Err(Error::InvalidWeights { detail: format!("weight {k} is {w}") });
        }
        let l1 = x.l1_norm();
        if (l1 - R::one()).abs() > norm_tol {
            return Err(Error::NormalizationError { index: k, norm: l1.as_f64() });
        }
    }
    let total: R = weights.iter().copied().sum();
    if total > R::one() + norm_tol {
        return Err(Error::InvalidWeights { detail: format!("weights sum to {total} > 1") });
    }

    let dim = n * n + 1;
    let mut w: Vec<R> = weights.to_vec();
    let mut xs: Vec<ComplexVector<R>> = unit_vectors.to_vec();
    let features: Vec<Vec<R>> = xs.iter().map(|x| feature_column(x)).collect();
    let mut feats = features;
    let drop_floor = R::epsilon() * R::lit(16.0) * total;

    while w.len() > dim {
        let cols = &feats[..=dim];
        let lambda = null_vector(cols, dim)?;
        // step size until the first weight along +lambda or -lambda vanishes
        let reach = |sign: R| {
            lambda
                .iter()
                .enumerate()
                .filter(|(_, &l)| sign * l > R::zero())
                .map(|(k, &l)| (w[k] / (sign * l), k))
                .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal))
        };
        let (t, hit, sign) = match (reach(R::one()), reach(-R::one())) {
            (Some(p), Some(m)) if m.0 < p.0 => (m.0, m.1, -R::one()),
            (Some(p), _) => (p.0, p.1, R::one()),
            (None, Some(m)) => (m.0, m.1, -R::one()),
            (None, None) => return Err(Error::NumericalRankFailure { residual: 0.0 }),
        };
        for (k, l) in lambda.iter().enumerate() {
            w[k] = w[k] - sign * t * *l;
        }
        w[hit] = R::zero();
        let mut k = 0;
        while k < w.len() {
            if w[k] <= drop_floor {
                w.remove(k);
                xs.remove(k);
                feats.remove(k);
            } else {
                k += 1;
            }
        }
    }
    Ok((w, xs))
}

/// Applies [`caratheodory_reduce`] to a decomposition of any total cost by
/// normalizing `w_k = ||g_k||_1^2 / cost`, `x_k = g_k / ||g_k||_1`.
pub fn reduce_decomposition<R: Real>(dec: &RankOneDecomposition<R>) -> Result<RankOneDecomposition<R>> {
    let n = dec.n();
    if dec.len() <= n * n + 1 {
        return Ok(dec.clone());
    }
    let total = dec.cost();
    let weights: Vec<R> = dec.vectors().iter().map(|g| g.l1_norm().powi(2) / total).collect();
    let units: Vec<ComplexVector<R>> = dec.vectors().iter().map(|g| g.scale(R::one() / g.l1_norm())).collect();
    let (w, xs) = caratheodory_reduce(&weights, &units)?;
    let vectors = w.iter().zip(&xs).map(|(&wk, x)| x.scale((wk * total).sqrt())).collect();
    RankOneDecomposition::from_vectors(n, vectors, dec.method())
}

/// Real coordinates of `x x*` in a basis of Hermitian matrices, plus the
/// constant weight coordinate.
fn feature_column<R: Real>(x: &ComplexVector<R>) -> Vec<R> {
    let n = x.len();
    let mut f = Vec::with_capacity(n * n + 1);
    for i in 0..n {
        f.push(x[i].norm_sqr());
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let z = x[i] * x[j].conj();
            f.push(z.re);
            f.push(z.im);
        }
    }
    f.push(R::one());
    f
}

/// Non-zero `lambda` with `sum_k lambda_k cols[k] = 0` for `dim + 1` columns of
/// length `dim`, via Gauss-Jordan elimination with complete pivoting.
fn null_vector<R: Real>(cols: &[Vec<R>], dim: usize) -> Result<Vec<R>> {
    let m = cols.len();
    debug_assert!(m > dim);
    // row-major copy: dim rows, m columns
    let mut a: Vec<Vec<R>> = (0..dim).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    let scale = a.iter().flatten().fold(R::zero(), |s, v| s.max(v.abs()));
    let singular = R::tol_floor(1e-10, 1e2) * R::one().max(scale);
    let mut pivot_col_of_row = Vec::new();
    let mut free = vec![true; m];
    for r in 0..dim {
        let mut best = (r, 0, R::zero());
        for (i, row) in a.iter().enumerate().skip(r) {
            for (j, v) in row.iter().enumerate() {
                if free[j] && v.abs() > best.2 {
                    best = (i, j, v.abs());
                }
            }
        }
        if best.2 <= singular {
            break;
        }
        a.swap(r, best.0);
        let pc = best.1;
        let p = a[r][pc];
        for v in a[r].iter_mut() {
            *v = *v / p;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r {
                let f = row[pc];
                if f != R::zero() {
                    for (v, pv) in row.iter_mut().zip(&pivot_row) {
                        *v = *v - f * *pv;
                    }
                }
            }
        }
        free[pc] = false;
        pivot_col_of_row.push(pc);
    }
    let f = free.iter().position(|&b| b).ok_or(Error::NumericalRankFailure { residual: f64::NAN })?;
    let mut lambda = vec![R::zero(); m];
    lambda[f] = R::one();
    for (r, &pc) in pivot_col_of_row.iter().enumerate() {
        lambda[pc] = -a[r][f];
    }
    let lmax = lambda.iter().fold(R::zero(), |s, v| s.max(v.abs()));
    let residual = (0..dim)
        .map(|i| cols.iter().zip(&lambda).map(|(c, l)| c[i] * *l).sum::<R>().abs())
        .fold(R::zero(), R::max);
    if residual > R::tol_floor(1e-10, 1e3) * lmax {
        return Err(Error::NumericalRankFailure { residual: residual.as_f64() });
    }
    Ok(lambda)
}

/// Shared by the oracle and gamma bounds: reduce when a decomposition is
/// longer than `n^2 + 1`, otherwise pass through.
pub(crate) fn cap_terms<R: Real>(dec: RankOneDecomposition<R>) -> RankOneDecomposition<R> {
    let method: Method = dec.method();
    match reduce_decomposition(&dec) {
        Ok(r) => r.with_method(method),
        Err(_) => dec,
    }
}
