//! The three bracketing functionals on Hermitian matrices:
//!
//! * `gamma_plus(A) = inf { sum_k ||g_k||_1^2 : A = sum_k g_k g_k* }` for PSD `A`;
//! * `gamma(A) = ||A||_{1,1}`, attained by the column splitting
//!   `A = sum_i A e_i e_i^T`;
//! * `gamma_zero(A) = inf { gamma_plus(B) + gamma_plus(C) : A = B - C }`.
//!
//! They satisfy `||A||_{I_1} <= ||A||_{1,1} <= gamma_zero(A) <= 2 ||A||_{1,1}`
//! and, for PSD `A`, `gamma_zero(A) <= gamma_plus(A)`. Only `gamma` is computed
//! exactly; the other two are bracketed by certified bounds.

mod bounds;
mod oracle;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

pub use bounds::{gamma0_bounds, gamma_plus_bounds, gamma_plus_bounds_with, BoundsConfig};
pub use oracle::{numeric_gamma_plus_oracle, OracleConfig};

use crate::decompose::RankOneDecomposition;
use crate::error::{Error, Result};
use crate::hermitian::{residual_report, ComplexVector, HermitianMatrix, ResidualReport};
use crate::scalar::Real;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Functional {
    GammaPlus,
    Gamma,
    GammaZero,
}

impl Functional {
    pub fn as_str(self) -> &'static str {
        match self {
            Functional::GammaPlus => "gamma_plus",
            Functional::Gamma => "gamma",
            Functional::GammaZero => "gamma_zero",
        }
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Effort {
    #[default]
    Fast,
    Thorough,
}

impl FromStr for Effort {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fast" => Ok(Effort::Fast),
            "thorough" => Ok(Effort::Thorough),
            other => Err(Error::InvalidConfig(format!("unknown effort `{other}`"))),
        }
    }
}

/// `A = sum_k g_k g_k* - sum_k h_k h_k*`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedDecomposition<R> {
    target_n: usize,
    positive: Vec<ComplexVector<R>>,
    negative: Vec<ComplexVector<R>>,
    cost: R,
}

impl<R: Real> SignedDecomposition<R> {
    pub fn from_parts(
        n: usize,
        positive: Vec<ComplexVector<R>>,
        negative: Vec<ComplexVector<R>>,
    ) -> Result<Self> {
        let p = RankOneDecomposition::from_vectors(n, positive, crate::decompose::Method::External)?;
        let q = RankOneDecomposition::from_vectors(n, negative, crate::decompose::Method::External)?;
        let cost = p.cost() + q.cost();
        Ok(SignedDecomposition { target_n: n, positive: p.into_vectors(), negative: q.into_vectors(), cost })
    }

    /// Pairs two PSD decompositions as `B - C`.
    pub fn from_difference(b: &RankOneDecomposition<R>, c: &RankOneDecomposition<R>) -> Result<Self> {
        if b.n() != c.n() {
            return Err(Error::DimensionMismatch { expected: b.n(), found: c.n() });
        }
        Self::from_parts(b.n(), b.vectors().to_vec(), c.vectors().to_vec())
    }

    pub fn n(&self) -> usize {
        self.target_n
    }

    pub fn positive(&self) -> &[ComplexVector<R>] {
        &self.positive
    }

    pub fn negative(&self) -> &[ComplexVector<R>] {
        &self.negative
    }

    pub fn cost(&self) -> R {
        self.cost
    }

    pub fn reconstruct(&self) -> HermitianMatrix<R> {
        let mut m = HermitianMatrix::zeros(self.target_n);
        for g in &self.positive {
            m.add_outer(g, R::one());
        }
        for h in &self.negative {
            m.add_outer(h, -R::one());
        }
        m
    }

    pub fn verify(&self, target: &HermitianMatrix<R>, recon_tol: R) -> Result<ResidualReport<R>> {
        target.check_dim(self.target_n)?;
        Ok(residual_report(target, &self.reconstruct(), recon_tol))
    }
}

/// `A = sum_k u_k v_k*` with cost `sum_k ||u_k||_1 ||v_k||_1`; certifies
/// `gamma(A)` from above.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedDecomposition<R> {
    target_n: usize,
    terms: Vec<(ComplexVector<R>, ComplexVector<R>)>,
    cost: R,
}

impl<R: Real> MixedDecomposition<R> {
    /// Column splitting `A = sum_i A[:, i] e_i^T`, zero columns dropped.
    pub fn columns(a: &HermitianMatrix<R>) -> Self {
        let n = a.n();
        let terms: Vec<_> = (0..n)
            .map(|i| (a.column(i), ComplexVector::basis(n, i)))
            .filter(|(u, _)| u.l1_norm() > R::zero())
            .collect();
        let cost = terms.iter().map(|(u, v)| u.l1_norm() * v.l1_norm()).sum();
        MixedDecomposition { target_n: n, terms, cost }
    }

    pub fn n(&self) -> usize {
        self.target_n
    }

    pub fn terms(&self) -> &[(ComplexVector<R>, ComplexVector<R>)] {
        &self.terms
    }

    pub fn cost(&self) -> R {
        self.cost
    }

    /// Dense `sum_k u_k v_k*`, row-major; not Hermitian term by term.
    pub fn reconstruct_dense(&self) -> Vec<num_complex::Complex<R>> {
        let n = self.target_n;
        let mut m = vec![num_complex::Complex::new(R::zero(), R::zero()); n * n];
        for (u, v) in &self.terms {
            for i in 0..n {
                for j in 0..n {
                    m[i * n + j] = m[i * n + j] + u[i] * v[j].conj();
                }
            }
        }
        m
    }
}

/// Decomposition backing a report's upper bound.
#[derive(Debug, Clone, PartialEq)]
pub enum Certificate<R> {
    Plus(RankOneDecomposition<R>),
    Signed(SignedDecomposition<R>),
    Mixed(MixedDecomposition<R>),
}

impl<R: Real> Certificate<R> {
    pub fn cost(&self) -> R {
        match self {
            Certificate::Plus(d) => d.cost(),
            Certificate::Signed(d) => d.cost(),
            Certificate::Mixed(d) => d.cost(),
        }
    }
}

/// Two-sided bound on one functional with the decomposition attaining the
/// upper bound.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaReport<R> {
    pub functional: Functional,
    pub lower: R,
    pub upper: R,
    /// `upper - lower <= cert` tolerance.
    pub certified: bool,
    pub per_method: BTreeMap<String, R>,
    pub best: Certificate<R>,
}

impl<R: Real> GammaReport<R> {
    pub fn gap(&self) -> R {
        self.upper - self.lower
    }
}

/// `gamma(A) = ||A||_{1,1}`.
pub fn gamma_exact<R: Real>(a: &HermitianMatrix<R>) -> R {
    a.norm_l11()
}

/// Exact report for `gamma`: lower and upper coincide and the column
/// splitting is the certificate.
pub fn gamma_exact_report<R: Real>(a: &HermitianMatrix<R>) -> GammaReport<R> {
    let cert = MixedDecomposition::columns(a);
    let v = gamma_exact(a);
    let mut per_method = BTreeMap::new();
    per_method.insert("columns".to_string(), cert.cost());
    GammaReport {
        functional: Functional::Gamma,
        lower: v,
        upper: cert.cost(),
        certified: true,
        per_method,
        best: Certificate::Mixed(cert),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Membership {
    Inside,
    Outside,
    Undecided,
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Membership::Inside => "inside",
            Membership::Outside => "outside",
            Membership::Undecided => "undecided",
        })
    }
}

/// Membership in `{T PSD : gamma_plus(T) <= 1}`. Between the two bounds the
/// answer is `Undecided`, never a guess.
pub fn omega_membership<R: Real>(t: &HermitianMatrix<R>, effort: Effort, tol: &Tolerances<R>) -> Membership {
    let slack = R::one() + R::lit(1e-9);
    if t.norm_l11() > slack {
        return Membership::Outside;
    }
    match gamma_plus_bounds(t, effort, tol) {
        Err(Error::NotPsd { .. }) => Membership::Outside,
        Err(_) => Membership::Undecided,
        Ok(rep) if rep.upper <= slack => Membership::Inside,
        Ok(_) => Membership::Undecided,
    }
}

/// Values along `||A||_{I_1} <= ||A||_{1,1} <= gamma_zero(A) <= 2 gamma(A)`,
/// plus `gamma_zero <= gamma_plus` when `A` is PSD. Only upper bounds of the
/// functionals are available, so the checks use them.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport<R> {
    pub trace_norm: R,
    pub l11: R,
    pub gamma: R,
    pub gamma_zero: (R, R),
    pub gamma_plus: Option<(R, R)>,
    pub checks: Vec<(String, bool)>,
}

impl<R: Real> InequalityReport<R> {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn violations(&self) -> Vec<&str> {
        self.checks.iter().filter(|(_, ok)| !ok).map(|(s, _)| s.as_str()).collect()
    }
}

pub fn inequality_report<R: Real>(a: &HermitianMatrix<R>, tol: &Tolerances<R>) -> Result<InequalityReport<R>> {
    let trace_norm = a.trace_norm()?;
    let l11 = a.norm_l11();
    let gamma = gamma_exact(a);
    let g0 = gamma0_bounds(a, tol)?;
    let gp = match gamma_plus_bounds(a, Effort::Fast, tol) {
        Ok(r) => Some((r.lower, r.upper)),
        Err(Error::NotPsd { .. }) => None,
        Err(e) => return Err(e),
    };
    let slack = R::lit(1e-9) * R::one().max(l11);
    let mut checks = vec![
        ("trace_norm <= l11".to_string(), trace_norm <= l11 + slack),
        ("l11 <= gamma_zero".to_string(), l11 <= g0.upper + slack),
        ("gamma_zero <= 2 gamma".to_string(), g0.upper <= gamma + gamma + slack),
    ];
    if let Some((_, up)) = gp {
        checks.push(("gamma_zero <= gamma_plus".to_string(), g0.upper <= up + slack));
        checks.push(("l11 <= gamma_plus".to_string(), l11 <= up + slack));
    }
    Ok(InequalityReport { trace_norm, l11, gamma, gamma_zero: (g0.lower, g0.upper), gamma_plus: gp, checks })
}
