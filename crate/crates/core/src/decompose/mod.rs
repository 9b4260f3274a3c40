//! Constructive rank-one decomposition strategies. Every strategy returns a
//! [`RankOneDecomposition`] whose cost is an upper bound on the minimal
//! `sum_k ||g_k||_1^2` over all decompositions `A = sum_k g_k g_k*`.

mod caratheodory;
mod factor;
mod greedy;
mod peel;
mod structure;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

pub use caratheodory::{caratheodory_reduce, reduce_decomposition};
pub(crate) use caratheodory::cap_terms;
pub use factor::{dd_decompose, eigen_decompose, is_diagonally_dominant, ldl_decompose, DominanceReport};
pub use greedy::{best_permuted_ldl, greedy_decompose, GreedyConfig};
pub use peel::{rank_one_peel, PeelStep};
pub use structure::{special_3x3_gap, structured_cost_check};

use crate::error::{Error, Result};
use crate::hermitian::{reconstruct, residual_report, ComplexVector, HermitianMatrix, ResidualReport};
use crate::scalar::Real;

/// Strategy that produced a decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Ldl,
    Eigen,
    Dd,
    Greedy,
    Oracle,
    External,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Ldl => "ldl",
            Method::Eigen => "eigen",
            Method::Dd => "dd",
            Method::Greedy => "greedy",
            Method::Oracle => "oracle",
            Method::External => "external",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "ldl" => Method::Ldl,
            "eigen" => Method::Eigen,
            "dd" => Method::Dd,
            "greedy" => Method::Greedy,
            "oracle" => Method::Oracle,
            "external" => Method::External,
            other => return Err(Error::InvalidConfig(format!("unknown method `{other}`"))),
        })
    }
}

/// `A = sum_k g_k g_k*` with cost `sum_k ||g_k||_1^2`.
///
/// Zero vectors are never stored, and the cost is always recomputed from the
/// vectors rather than trusted from an outside source.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOneDecomposition<R> {
    target_n: usize,
    vectors: Vec<ComplexVector<R>>,
    cost: R,
    method: Method,
}

impl<R: Real> RankOneDecomposition<R> {
    /// Builds a decomposition and checks that it reconstructs `target` within
    /// `recon_tol * max(1, max |A_ij|)`.
    pub fn new(
        target: &HermitianMatrix<R>,
        vectors: Vec<ComplexVector<R>>,
        method: Method,
        recon_tol: R,
    ) -> Result<Self> {
        let dec = Self::from_vectors(target.n(), vectors, method)?;
        let rep = dec.verify(target, recon_tol)?;
        if !rep.pass {
            return Err(Error::ReconstructionMismatch {
                residual: rep.residual.as_f64(),
                tolerance: rep.tolerance.as_f64(),
            });
        }
        Ok(dec)
    }

    /// Builds without a target; callers verify separately.
    pub fn from_vectors(n: usize, vectors: Vec<ComplexVector<R>>, method: Method) -> Result<Self> {
        for v in &vectors {
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: v.len() });
            }
            if !v.is_finite() {
                return Err(Error::InvalidConfig("decomposition vector has non-finite entries".into()));
            }
        }
        let vectors: Vec<_> = vectors.into_iter().filter(|v| v.l1_norm() > R::zero()).collect();
        let cost = cost_of(&vectors);
        Ok(RankOneDecomposition { target_n: n, vectors, cost, method })
    }

    pub fn n(&self) -> usize {
        self.target_n
    }

    pub fn vectors(&self) -> &[ComplexVector<R>] {
        &self.vectors
    }

    pub fn into_vectors(self) -> Vec<ComplexVector<R>> {
        self.vectors
    }

    pub fn cost(&self) -> R {
        self.cost
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn reconstruct(&self) -> HermitianMatrix<R> {
        reconstruct(self.target_n, &self.vectors).expect("dimensions checked at construction")
    }

    pub fn verify(&self, target: &HermitianMatrix<R>, recon_tol: R) -> Result<ResidualReport<R>> {
        target.check_dim(self.target_n)?;
        Ok(residual_report(target, &self.reconstruct(), recon_tol))
    }

    /// Decomposition of `s * A` for `s >= 0`: every vector scaled by `sqrt(s)`.
    pub fn scaled(&self, s: R) -> Self {
        let r = s.sqrt();
        let vectors: Vec<_> = self.vectors.iter().map(|v| v.scale(r)).collect();
        Self::from_vectors(self.target_n, vectors, self.method).expect("same dimension")
    }

    /// Concatenation; decomposes the sum of the two targets.
    pub fn concat(&self, other: &Self, method: Method) -> Result<Self> {
        let mut vectors = self.vectors.clone();
        vectors.extend(other.vectors.iter().cloned());
        Self::from_vectors(self.target_n, vectors, method)
    }

    /// Lower cost first; exact ties are broken by lexicographic vector order so
    /// merges do not depend on evaluation order.
    pub fn quality_cmp(&self, other: &Self) -> Ordering {
        self.cost
            .partial_cmp(&other.cost)
            .unwrap_or(Ordering::Equal)
            .then_with(|| self.vectors.len().cmp(&other.vectors.len()))
            .then_with(|| {
                for (a, b) in self.vectors.iter().zip(&other.vectors) {
                    let o = a.lex_cmp(b);
                    if o.is_ne() {
                        return o;
                    }
                }
                Ordering::Equal
            })
            .then_with(|| self.method.cmp(&other.method))
    }
}

/// `sum_k ||g_k||_1^2`.
pub fn cost_of<R: Real>(vectors: &[ComplexVector<R>]) -> R {
    crate::scalar::compensated_sum(vectors.iter().map(|v| v.l1_norm().powi(2)))
}

/// Deterministic argmin under [`RankOneDecomposition::quality_cmp`].
pub fn best_of<R: Real>(candidates: impl IntoIterator<Item = RankOneDecomposition<R>>) -> Option<RankOneDecomposition<R>> {
    candidates.into_iter().min_by(|a, b| a.quality_cmp(b))
}

pub(crate) fn require_psd<R: Real>(
    a: &HermitianMatrix<R>,
    tol: &crate::tolerance::Tolerances<R>,
) -> Result<crate::hermitian::EigenSystem<R>> {
    let eig = a.eigh_with(tol)?;
    if !crate::hermitian::eig_is_psd(&eig, tol.psd) {
        return Err(Error::NotPsd {
            detail: format!("smallest eigenvalue {:e}", eig.min_eigenvalue().as_f64()),
        });
    }
    Ok(eig)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_vectors_are_dropped_and_cost_recomputed() {
        let d = RankOneDecomposition::from_vectors(
            2,
            vec![ComplexVector::from_real(&[1.0, -2.0]), ComplexVector::zeros(2)],
            Method::External,
        )
        .unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.cost(), 9.0);
    }

    #[test]
    fn constructor_rejects_non_reconstructing_vectors() {
        let target = HermitianMatrix::<f64>::identity(2);
        let err = RankOneDecomposition::new(&target, vec![ComplexVector::basis(2, 0)], Method::External, 1e-9);
        assert!(matches!(err, Err(Error::ReconstructionMismatch { .. })));
    }

    #[test]
    fn method_names_round_trip() {
        for m in [Method::Ldl, Method::Eigen, Method::Dd, Method::Greedy, Method::Oracle, Method::External] {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert!("qr".parse::<Method>().is_err());
    }

    #[test]
    fn scaling_is_positively_homogeneous() {
        let d = RankOneDecomposition::from_vectors(2, vec![ComplexVector::from_real(&[1.0, 2.0])], Method::Ldl).unwrap();
        let s = d.scaled(4.0);
        assert!((s.cost() - 4.0f64 * d.cost()).abs() < 1e-12);
    }
}
