//! JSON formats shared by the library and the command-line front end.
//!
//! * matrix: `{"n": 2, "entries": [[[re, im], ...], ...]}`, where a plain
//!   number may replace `[re, im]` for a real entry;
//! * decomposition: `{"method": "ldl", "cost": 6.0, "vectors": [[[re, im], ...], ...]}`
//!   with an optional `"residual"`;
//! * gamma report: `{"functional", "lower", "upper", "certified", "per_method", "decomposition"}`.
//!
//! Rendering goes through fixed-order structs, so equal values always give
//! identical bytes.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::decompose::{reduce_decomposition, Method, RankOneDecomposition};
use crate::error::{Error, Result};
use crate::experiments::ExperimentReport;
use crate::gamma::{Certificate, GammaReport, InequalityReport};
use crate::hermitian::{verify_reconstruction, ComplexVector, HermitianMatrix};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Pair([f64; 2]),
}

impl From<Entry> for Complex<f64> {
    fn from(e: Entry) -> Self {
        match e {
            Entry::Real(x) => Complex::new(x, 0.0),
            Entry::Pair([re, im]) => Complex::new(re, im),
        }
    }
}

type Pair = [f64; 2];

fn pairs(v: &ComplexVector<f64>) -> Vec<Pair> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

#[derive(Deserialize)]
struct MatrixIn {
    n: usize,
    entries: Vec<Vec<Entry>>,
}

#[derive(Serialize)]
struct MatrixOut {
    n: usize,
    entries: Vec<Vec<Pair>>,
}

pub fn parse_matrix(text: &str, tol: &Tolerances<f64>) -> Result<HermitianMatrix<f64>> {
    let m: MatrixIn = serde_json::from_str(text)?;
    if m.entries.len() != m.n {
        return Err(Error::DimensionMismatch { expected: m.n, found: m.entries.len() });
    }
    let rows: Vec<Vec<Complex<f64>>> = m.entries.into_iter().map(|r| r.into_iter().map(Complex::from).collect()).collect();
    HermitianMatrix::ingest(&rows, tol.hermitian)
}

pub fn render_matrix(a: &HermitianMatrix<f64>) -> String {
    let out = MatrixOut {
        n: a.n(),
        entries: a.to_rows().into_iter().map(|r| r.into_iter().map(|z| [z.re, z.im]).collect()).collect(),
    };
    to_json(&out)
}

/// A decomposition as read from disk; the cost is the claimed value, not yet
/// checked against the vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionDoc {
    pub method: Method,
    pub cost: f64,
    pub vectors: Vec<ComplexVector<f64>>,
    pub residual: Option<f64>,
}

#[derive(Deserialize)]
struct DecompositionIn {
    method: String,
    cost: f64,
    vectors: Vec<Vec<Entry>>,
    #[serde(default)]
    residual: Option<f64>,
}

#[derive(Serialize)]
struct DecompositionOut {
    method: &'static str,
    cost: f64,
    vectors: Vec<Vec<Pair>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual: Option<f64>,
}

impl DecompositionOut {
    fn of(d: &RankOneDecomposition<f64>, residual: Option<f64>) -> Self {
        DecompositionOut {
            method: d.method().as_str(),
            cost: d.cost(),
            vectors: d.vectors().iter().map(pairs).collect(),
            residual,
        }
    }
}

pub fn parse_decomposition(text: &str) -> Result<DecompositionDoc> {
    let d: DecompositionIn = serde_json::from_str(text)?;
    Ok(DecompositionDoc {
        method: d.method.parse()?,
        cost: d.cost,
        vectors: d.vectors.into_iter().map(|v| ComplexVector::new(v.into_iter().map(Complex::from).collect())).collect(),
        residual: d.residual,
    })
}

impl DecompositionDoc {
    /// Dimension shared by all vectors.
    pub fn dimension(&self) -> Result<usize> {
        let n = self.vectors.first().map_or(0, |v| v.len());
        match self.vectors.iter().find(|v| v.len() != n) {
            Some(v) => Err(Error::DimensionMismatch { expected: n, found: v.len() }),
            None => Ok(n),
        }
    }

    /// Checks that the claimed cost matches `sum_k ||g_k||_1^2` to
    /// `1e-9 * max(1, cost)` and returns the validated decomposition.
    pub fn into_decomposition(self) -> Result<RankOneDecomposition<f64>> {
        let n = self.dimension()?;
        let d = RankOneDecomposition::from_vectors(n, self.vectors, self.method)?;
        let slack = 1e-9 * d.cost().max(1.0);
        if !((d.cost() - self.cost).abs() <= slack) {
            return Err(Error::ReconstructionMismatch { residual: (d.cost() - self.cost).abs(), tolerance: slack });
        }
        Ok(d)
    }
}

pub fn render_decomposition(d: &RankOneDecomposition<f64>, residual: Option<f64>) -> String {
    to_json(&DecompositionOut::of(d, residual))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertifyOutcome {
    pub pass: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub claimed_cost: f64,
    pub cost: f64,
}

/// Verifies a decomposition file against a matrix: every vector has the
/// matrix dimension, the reconstruction is within `recon_tol`, and the
/// claimed cost is the true cost.
pub fn certify(a: &HermitianMatrix<f64>, doc: &DecompositionDoc, tol: &Tolerances<f64>) -> CertifyOutcome {
    let cost: f64 = doc.vectors.iter().map(|v| v.l1_norm().powi(2)).sum();
    let cost_ok = (cost - doc.cost).abs() <= 1e-9 * cost.max(1.0);
    match verify_reconstruction(a, &doc.vectors, tol.recon) {
        Ok(rep) => CertifyOutcome {
            pass: rep.pass && cost_ok,
            residual: rep.residual,
            tolerance: rep.tolerance,
            claimed_cost: doc.cost,
            cost,
        },
        Err(_) => CertifyOutcome {
            pass: false,
            residual: f64::INFINITY,
            tolerance: tol.recon * a.max_abs_entry().max(1.0),
            claimed_cost: doc.cost,
            cost,
        },
    }
}

pub fn render_certify(c: &CertifyOutcome) -> String {
    to_json(c)
}

/// Reduces a decomposition file to at most `n^2 + 1` terms, checking the
/// claimed cost first and the reduced reconstruction afterwards.
pub fn reduce_document(doc: DecompositionDoc, tol: &Tolerances<f64>) -> Result<(RankOneDecomposition<f64>, f64)> {
    let d = doc.into_decomposition()?;
    let target = d.reconstruct();
    let red = reduce_decomposition(&d)?.with_method(d.method());
    let rep = red.verify(&target, tol.recon)?;
    if !rep.pass {
        return Err(Error::ReconstructionMismatch { residual: rep.residual, tolerance: rep.tolerance });
    }
    Ok((red, rep.residual))
}

#[derive(Serialize)]
pub struct Norms {
    pub l11: f64,
    pub trace: f64,
    pub operator: f64,
    pub frobenius: f64,
}

/// `||A||_{1,1}`, trace norm, operator norm and Frobenius norm.
pub fn norms(a: &HermitianMatrix<f64>) -> Result<Norms> {
    Ok(Norms { l11: a.norm_l11(), trace: a.trace_norm()?, operator: a.operator_norm()?, frobenius: a.frobenius_norm() })
}

pub fn render_norms(n: &Norms) -> String {
    to_json(n)
}

#[derive(Serialize)]
#[serde(untagged)]
enum CertificateOut {
    Plus(DecompositionOut),
    Signed { cost: f64, positive: Vec<Vec<Pair>>, negative: Vec<Vec<Pair>> },
    Mixed { cost: f64, terms: Vec<[Vec<Pair>; 2]> },
}

#[derive(Serialize)]
struct GammaReportOut {
    functional: &'static str,
    lower: f64,
    upper: f64,
    certified: bool,
    per_method: BTreeMap<String, f64>,
    decomposition: CertificateOut,
}

pub fn render_gamma_report(r: &GammaReport<f64>) -> String {
    let decomposition = match &r.best {
        Certificate::Plus(d) => CertificateOut::Plus(DecompositionOut::of(d, None)),
        Certificate::Signed(s) => CertificateOut::Signed {
            cost: s.cost(),
            positive: s.positive().iter().map(pairs).collect(),
            negative: s.negative().iter().map(pairs).collect(),
        },
        Certificate::Mixed(m) => CertificateOut::Mixed {
            cost: m.cost(),
            terms: m.terms().iter().map(|(u, v)| [pairs(u), pairs(v)]).collect(),
        },
    };
    to_json(&GammaReportOut {
        functional: r.functional.as_str(),
        lower: r.lower,
        upper: r.upper,
        certified: r.certified,
        per_method: r.per_method.clone(),
        decomposition,
    })
}

#[derive(Serialize)]
struct InequalityOut<'a> {
    trace_norm: f64,
    l11: f64,
    gamma: f64,
    gamma_zero: [f64; 2],
    gamma_plus: Option<[f64; 2]>,
    holds: bool,
    violations: Vec<&'a str>,
}

pub fn render_inequality_report(r: &InequalityReport<f64>) -> String {
    to_json(&InequalityOut {
        trace_norm: r.trace_norm,
        l11: r.l11,
        gamma: r.gamma,
        gamma_zero: [r.gamma_zero.0, r.gamma_zero.1],
        gamma_plus: r.gamma_plus.map(|(a, b)| [a, b]),
        holds: r.holds(),
        violations: r.violations(),
    })
}

pub fn render_experiment_json(r: &ExperimentReport) -> String {
    to_json(r)
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("plain data serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::ldl_decompose;

    #[test]
    fn matrix_round_trip_with_mixed_entries() {
        let tol = Tolerances::default();
        let a = parse_matrix(r#"{"n": 2, "entries": [[2, [1, -1]], [[1, 1], 3]]}"#, &tol).unwrap();
        assert_eq!(a.get(0, 1), Complex::new(1.0, -1.0));
        let b = parse_matrix(&render_matrix(&a), &tol).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn matrix_errors() {
        let tol = Tolerances::default();
        assert!(matches!(parse_matrix("{", &tol), Err(Error::Json(_))));
        assert!(matches!(
            parse_matrix(r#"{"n": 3, "entries": [[1, 0], [0, 1]]}"#, &tol),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            parse_matrix(r#"{"n": 2, "entries": [[1, 2], [0, 1]]}"#, &tol),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn decomposition_round_trip_and_certify() {
        let tol = Tolerances::default();
        let a = HermitianMatrix::from_real_rows(&[vec![2., 1.], vec![1., 2.]]).unwrap();
        let d = ldl_decompose(&a, &tol).unwrap();
        let text = render_decomposition(&d, Some(0.0));
        let doc = parse_decomposition(&text).unwrap();
        assert_eq!(doc.method, Method::Ldl);
        assert!(certify(&a, &doc, &tol).pass);

        let mut tampered = doc.clone();
        tampered.cost += 1.0;
        assert!(!certify(&a, &tampered, &tol).pass);
        let three = HermitianMatrix::<f64>::identity(3);
        assert!(!certify(&three, &doc, &tol).pass);
    }

    #[test]
    fn reduce_rejects_wrong_cost() {
        let tol = Tolerances::default();
        let doc = parse_decomposition(r#"{"method": "external", "cost": 5.0, "vectors": [[1, 1]]}"#).unwrap();
        assert!(matches!(reduce_document(doc, &tol), Err(Error::ReconstructionMismatch { .. })));
        let doc = parse_decomposition(r#"{"method": "external", "cost": 4.0, "vectors": [[1, 1]]}"#).unwrap();
        let (d, _) = reduce_document(doc, &tol).unwrap();
        assert_eq!(d.len(), 1);
    }

    #[test]
    fn norms_of_swap() {
        let a = HermitianMatrix::from_real_rows(&[vec![0., 1.], vec![1., 0.]]).unwrap();
        let n = norms(&a).unwrap();
        assert_eq!(n.l11, 2.0);
        assert!((n.trace - 2.0).abs() < 1e-12 && (n.operator - 1.0).abs() < 1e-12);
        assert!((n.frobenius - 2f64.sqrt()).abs() < 1e-15);
    }
}
