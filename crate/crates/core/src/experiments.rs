//! Monte-Carlo harness over random Gram matrices `G G^T` with i.i.d.
//! standard Gaussian `G`: worst-case cost ratios `max_A J(A) / ||A||_{1,1}`
//! per dimension, plus `c sqrt(N)` and `a log N + b` least-squares fits.
//!
//! Random streams come from ChaCha8 (`rand_chacha` 0.3) seeded with
//! `base_seed + realization`; Gaussians are drawn by Box-Muller from the
//! generator's uniform `f64` output.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::decompose::{eigen_decompose, greedy_decompose, ldl_decompose, GreedyConfig};
use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;
use crate::tolerance::Tolerances;

pub const DEFAULT_DIMS: [usize; 5] = [4, 8, 16, 32, 64];
pub const DEFAULT_REALIZATIONS: usize = 30;

/// Two independent standard normals from two uniforms (Box-Muller).
pub fn gaussian_pair<G: Rng + ?Sized>(rng: &mut G) -> (f64, f64) {
    // 1 - U lies in (0, 1], keeping the logarithm finite
    let u1 = 1.0 - rng.gen::<f64>();
    let u2 = rng.gen::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let t = 2.0 * std::f64::consts::PI * u2;
    (r * t.cos(), r * t.sin())
}

/// `G G^T` for an `n x n` standard Gaussian `G` filled row-major.
pub fn random_psd(n: usize, seed: u64) -> HermitianMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Vec::with_capacity(n * n + 1);
    while g.len() < n * n {
        let (a, b) = gaussian_pair(&mut rng);
        g.push(a);
        g.push(b);
    }
    g.truncate(n * n);
    HermitianMatrix::from_upper(n, |i, j| {
        let s: f64 = (0..n).map(|k| g[i * n + k] * g[j * n + k]).sum();
        num_complex::Complex::new(s, 0.0)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum EnsembleMethod {
    #[serde(rename = "LDL")]
    Ldl,
    Eigen,
    Greedy,
}

impl EnsembleMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            EnsembleMethod::Ldl => "LDL",
            EnsembleMethod::Eigen => "Eigen",
            EnsembleMethod::Greedy => "Greedy",
        }
    }
}

impl fmt::Display for EnsembleMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EnsembleMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ldl" => Ok(EnsembleMethod::Ldl),
            "eigen" => Ok(EnsembleMethod::Eigen),
            "greedy" => Ok(EnsembleMethod::Greedy),
            other => Err(Error::InvalidConfig(format!("unknown ensemble method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleConfig {
    pub dims: Vec<usize>,
    pub realizations: usize,
    pub base_seed: u64,
    pub methods: Vec<EnsembleMethod>,
    #[serde(skip)]
    pub greedy: GreedyConfig,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        EnsembleConfig {
            dims: DEFAULT_DIMS.to_vec(),
            realizations: DEFAULT_REALIZATIONS,
            base_seed: 0,
            methods: vec![EnsembleMethod::Ldl, EnsembleMethod::Eigen],
            greedy: GreedyConfig::light(),
        }
    }
}

impl EnsembleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.realizations == 0 {
            return Err(Error::InvalidConfig("realizations must be at least 1".into()));
        }
        if self.dims.is_empty() {
            return Err(Error::InvalidConfig("dims must be non-empty".into()));
        }
        if let Some(d) = self.dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidConfig(format!("dimension {d} is below 2")));
        }
        Ok(())
    }

    /// Methods deduplicated in canonical order (LDL, Eigen, Greedy).
    pub fn method_set(&self) -> Vec<EnsembleMethod> {
        let mut m = self.methods.clone();
        m.sort();
        m.dedup();
        m
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealizationRow {
    pub n: usize,
    pub method: EnsembleMethod,
    pub realization: usize,
    pub seed: u64,
    /// `J_method(A) / ||A||_{1,1}`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodStats {
    pub method: EnsembleMethod,
    /// Worst (largest) ratio over the realizations.
    pub worst: f64,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimSummary {
    pub n: usize,
    pub stats: Vec<MethodStats>,
}

impl DimSummary {
    pub fn worst(&self, method: EnsembleMethod) -> Option<f64> {
        self.stats.iter().find(|s| s.method == method).map(|s| s.worst)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveFit {
    /// `c` minimizing `sum_N (F_Eigen(N) - c sqrt(N))^2`.
    pub sqrt_coeff: Option<f64>,
    pub sqrt_residual: Option<f64>,
    /// `(a, b)` minimizing `sum_N (F_LDL(N) - a ln N - b)^2`.
    pub log_coeffs: Option<(f64, f64)>,
    pub log_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub config: EnsembleConfig,
    pub rows: Vec<RealizationRow>,
    pub summary: Vec<DimSummary>,
    pub fit: Option<CurveFit>,
}

impl ExperimentReport {
    pub fn worst_curve(&self, method: EnsembleMethod) -> Vec<(usize, f64)> {
        self.summary.iter().filter_map(|d| d.worst(method).map(|f| (d.n, f))).collect()
    }
}

/// Runs every `(N, realization)` pair; realizations are evaluated in parallel
/// and assembled in `(N, realization)` order.
pub fn run_ensemble(config: &EnsembleConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let methods = config.method_set();
    let tol = Tolerances::<f64>::default();
    let tasks: Vec<(usize, usize)> =
        config.dims.iter().flat_map(|&n| (0..config.realizations).map(move |r| (n, r))).collect();
    let results: Vec<Result<Vec<RealizationRow>>> = tasks
        .par_iter()
        .map(|&(n, r)| {
            let seed = config.base_seed.wrapping_add(r as u64);
            let a = random_psd(n, seed);
            let l11 = a.norm_l11();
            methods
                .iter()
                .map(|&m| {
                    let cost = match m {
                        EnsembleMethod::Ldl => ldl_decompose(&a, &tol),
                        EnsembleMethod::Eigen => eigen_decompose(&a, &tol),
                        EnsembleMethod::Greedy => greedy_decompose(&a, &config.greedy, &tol),
                    }
                    .map_err(|e| Error::Realization { n, realization: r, source: Box::new(e) })?
                    .cost();
                    Ok(RealizationRow { n, method: m, realization: r, seed, ratio: cost / l11 })
                })
                .collect()
        })
        .collect();
    let mut rows = Vec::with_capacity(tasks.len() * methods.len());
    for r in results {
        rows.extend(r?);
    }

    let mut by_dim: BTreeMap<usize, ()> = BTreeMap::new();
    let mut summary = Vec::new();
    for &n in &config.dims {
        if by_dim.insert(n, ()).is_some() {
            continue;
        }
        let stats = methods
            .iter()
            .map(|&m| {
                let ratios: Vec<f64> =
                    rows.iter().filter(|row| row.n == n && row.method == m).map(|row| row.ratio).collect();
                let k = ratios.len() as f64;
                let mean = ratios.iter().sum::<f64>() / k;
                let var = ratios.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / k;
                MethodStats {
                    method: m,
                    worst: ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                    mean,
                    std: var.sqrt(),
                }
            })
            .collect();
        summary.push(DimSummary { n, stats });
    }
    let mut report = ExperimentReport { config: config.clone(), rows, summary, fit: None };
    report.fit = fit_curves(&report).ok();
    Ok(report)
}

/// `c = sum F sqrt(N) / sum N` and its residual sum of squares.
pub fn fit_sqrt(points: &[(f64, f64)]) -> (f64, f64) {
    let num: f64 = points.iter().map(|(n, f)| f * n.sqrt()).sum();
    let den: f64 = points.iter().map(|(n, _)| *n).sum();
    let c = num / den;
    let res = points.iter().map(|(n, f)| (f - c * n.sqrt()).powi(2)).sum();
    (c, res)
}

/// Ordinary least squares of `F` on `ln N`; returns `(a, b, residual)`.
pub fn fit_log(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|(n, _)| n.ln()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = points.iter().map(|(_, f)| f).sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(points).map(|(x, (_, f))| (x - mx) * (f - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let a = sxy / sxx;
    let b = my - a * mx;
    let res = xs.iter().zip(points).map(|(x, (_, f))| (f - a * x - b).powi(2)).sum();
    (a, b, res)
}

pub const MIN_FIT_DIMS: usize = 3;

pub fn fit_curves(report: &ExperimentReport) -> Result<CurveFit> {
    if report.summary.len() < MIN_FIT_DIMS {
        return Err(Error::InsufficientData { needed: MIN_FIT_DIMS, found: report.summary.len() });
    }
    let pts = |m| -> Vec<(f64, f64)> {
        report.worst_curve(m).into_iter().map(|(n, f)| (n as f64, f)).collect()
    };
    let eig = pts(EnsembleMethod::Eigen);
    let ldl = pts(EnsembleMethod::Ldl);
    let (sqrt_coeff, sqrt_residual) =
        if eig.is_empty() { (None, None) } else { let (c, r) = fit_sqrt(&eig); (Some(c), Some(r)) };
    let (log_coeffs, log_residual) = if ldl.is_empty() {
        (None, None)
    } else {
        let (a, b, r) = fit_log(&ldl);
        (Some((a, b)), Some(r))
    };
    Ok(CurveFit { sqrt_coeff, sqrt_residual, log_coeffs, log_residual })
}

/// Writes the realization table, then (when non-empty) a per-dimension
/// summary block and a fit block, separated by blank lines.
pub fn emit_csv<W: Write>(report: &ExperimentReport, mut out: W) -> Result<()> {
    writeln!(out, "N,method,realization,seed,ratio")?;
    for r in &report.rows {
        writeln!(out, "{},{},{},{},{}", r.n, r.method, r.realization, r.seed, r.ratio)?;
    }
    if report.rows.is_empty() {
        return Ok(());
    }
    let methods = report.config.method_set();
    let mut header = vec!["N".to_string()];
    for prefix in ["F", "mean", "std"] {
        header.extend(methods.iter().map(|m| format!("{prefix}_{m}")));
    }
    writeln!(out)?;
    writeln!(out, "{}", header.join(","))?;
    for d in &report.summary {
        let mut cells = vec![d.n.to_string()];
        cells.extend(d.stats.iter().map(|s| s.worst.to_string()));
        cells.extend(d.stats.iter().map(|s| s.mean.to_string()));
        cells.extend(d.stats.iter().map(|s| s.std.to_string()));
        writeln!(out, "{}", cells.join(","))?;
    }
    if let Some(fit) = &report.fit {
        writeln!(out)?;
        writeln!(out, "fit,value")?;
        if let (Some(c), Some(r)) = (fit.sqrt_coeff, fit.sqrt_residual) {
            writeln!(out, "sqrt_c,{c}")?;
            writeln!(out, "sqrt_residual,{r}")?;
        }
        if let (Some((a, b)), Some(r)) = (fit.log_coeffs, fit.log_residual) {
            writeln!(out, "log_a,{a}")?;
            writeln!(out, "log_b,{b}")?;
            writeln!(out, "log_residual,{r}")?;
        }
    }
    Ok(())
}

pub fn write_csv(report: &ExperimentReport, path: impl AsRef<Path>) -> Result<()> {
    let mut buf = Vec::new();
    emit_csv(report, &mut buf)?;
    std::fs::write(path, buf)?;
    Ok(())
}
