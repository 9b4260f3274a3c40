use std::collections::BTreeSet;

use crate::decompose::RankOneDecomposition;
use crate::error::{Error, Result};
use crate::hermitian::{HermitianMatrix, ComplexVector};
use crate::scalar::Real;
use crate::tolerance::Tolerances;

/// True when every vector is supported on a single index or a pair of
/// indices, with at most one vector per singleton and per unordered pair.
/// Such a decomposition costs exactly `||A||_{1,1}`; the check also requires
/// that identity to hold to `1e-9 * max(1, ||A||_{1,1})`, so a `true` result
/// certifies optimality.
pub fn structured_cost_check<R: Real>(a: &HermitianMatrix<R>, dec: &RankOneDecomposition<R>) -> bool {
    if dec.n() != a.n() {
        return false;
    }
    let mut singles = BTreeSet::new();
    let mut pairs = BTreeSet::new();
    for v in dec.vectors() {
        let supp = v.support(support_floor(v));
        let fresh = match supp.as_slice() {
            [i] => singles.insert(*i),
            [i, j] => pairs.insert((*i, *j)),
            _ => false,
        };
        if !fresh {
            return false;
        }
    }
    let l11 = a.norm_l11();
    (dec.cost() - l11).abs() <= R::tol_floor(1e-9, 1e3) * R::one().max(l11)
}

fn support_floor<R: Real>(v: &ComplexVector<R>) -> R {
    R::tol_floor(1e-14, 8.0) * R::one().max(v.linf_norm())
}

/// `2 (|ae - conj(b) c| + |b||c| - a|e|) / a` for
/// `A = [[a, b, c], [., d, e], [., ., f]]`: the amount by which the
/// natural-order LDL cost exceeds `||A||_{1,1}` for a PSD 3x3 matrix of rank
/// 2 or 3. A zero gap certifies that LDL is optimal.
///
/// When `a` vanishes the first row is zero, LDL reduces to the 2x2 case and
/// the gap is 0.
pub fn special_3x3_gap<R: Real>(a: &HermitianMatrix<R>, tol: &Tolerances<R>) -> Result<R> {
    if a.n() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: a.n() });
    }
    let eig = crate::decompose::require_psd(a, tol)?;
    if crate::hermitian::rank_of(&eig, tol.rank) < 2 {
        return Err(Error::RankOneInput);
    }
    let aa = a.get(0, 0).re;
    if aa <= tol.pivot * R::one().max(a.max_diag()) {
        return Ok(R::zero());
    }
    let b = a.get(0, 1);
    let c = a.get(0, 2);
    let e = a.get(1, 2);
    let two = R::lit(2.0);
    Ok(two * ((e * aa - b.conj() * c).norm() + b.norm() * c.norm() - aa * e.norm()) / aa)
}
