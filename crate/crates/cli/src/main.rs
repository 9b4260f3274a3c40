//! `rankone`: norms, decompositions, gamma bounds, certification, reduction
//! and ensemble experiments over JSON matrix and decomposition files.
//!
//! Exit codes: 0 success, 2 bad input or flags, 3 matrix not PSD, 4 matrix
//! not diagonally dominant, 5 certification or reconstruction failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rankone::experiments::{emit_csv, run_ensemble, EnsembleConfig, EnsembleMethod};
use rankone::io;
use rankone::{
    dd_decompose, eigen_decompose, gamma0_bounds, gamma_exact_report, gamma_plus_bounds_with, greedy_decompose,
    ldl_decompose, numeric_gamma_plus_oracle, BoundsConfig, Effort, Error, GreedyConfig, HermitianMatrix64,
    OracleConfig, RankOneDecomposition64, Tolerances64,
};

#[derive(Parser, Debug)]
#[command(name = "rankone", version, about = "Rank-one decompositions minimizing sum ||g_k||_1^2")]
struct Cli {
    #[command(flatten)]
    tol: TolFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct TolFlags {
    #[arg(long, global = true, value_name = "TOL")]
    hermitian_tol: Option<f64>,
    #[arg(long, global = true, value_name = "TOL")]
    psd_tol: Option<f64>,
    #[arg(long, global = true, value_name = "TOL")]
    pivot_tol: Option<f64>,
    #[arg(long, global = true, value_name = "TOL")]
    recon_tol: Option<f64>,
    #[arg(long, global = true, value_name = "TOL")]
    rank_tol: Option<f64>,
    #[arg(long, global = true, value_name = "TOL")]
    cert_tol: Option<f64>,
    #[arg(long, global = true, value_name = "TOL")]
    dd_tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// l11, trace, operator and Frobenius norms of a matrix.
    Norms {
        matrix: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decompose a PSD matrix with one strategy.
    Decompose {
        matrix: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Ldl)]
        method: MethodArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bounds on gamma_plus, gamma_zero, or the exact gamma.
    Gamma {
        matrix: PathBuf,
        #[arg(long, value_enum, default_value_t = FunctionalArg::Plus)]
        functional: FunctionalArg,
        #[arg(long, value_enum, default_value_t = EffortArg::Fast)]
        effort: EffortArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a decomposition file reconstructs a matrix and states its cost.
    Certify { matrix: PathBuf, decomposition: PathBuf },
    /// Reduce a decomposition to at most n^2 + 1 terms.
    Reduce {
        decomposition: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Worst-case cost ratios over random Gram matrices.
    Experiment {
        #[arg(long, value_delimiter = ',', default_values_t = [4usize, 8, 16, 32, 64])]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 30)]
        realizations: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',', value_enum, default_values_t = [EnsembleArg::Ldl, EnsembleArg::Eigen])]
        methods: Vec<EnsembleArg>,
        /// CSV destination; without it the CSV goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MethodArg {
    Ldl,
    Eigen,
    Dd,
    Greedy,
    Oracle,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FunctionalArg {
    Plus,
    Zero,
    Exact,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum EffortArg {
    Fast,
    Thorough,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum EnsembleArg {
    Ldl,
    Eigen,
    Greedy,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::NotPsd { .. } => 3,
            Error::NotDiagonallyDominant { .. } => 4,
            Error::ReconstructionMismatch { .. } => 5,
            Error::EigenFailure { .. } | Error::StallDetected { .. } | Error::NumericalRankFailure { .. } => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn tolerances(flags: &TolFlags) -> Result<Tolerances64, Failure> {
    let mut t = Tolerances64::default();
    let set = |slot: &mut f64, v: Option<f64>| {
        if let Some(v) = v {
            *slot = v;
        }
    };
    set(&mut t.hermitian, flags.hermitian_tol);
    set(&mut t.psd, flags.psd_tol);
    set(&mut t.pivot, flags.pivot_tol);
    set(&mut t.recon, flags.recon_tol);
    set(&mut t.rank, flags.rank_tol);
    set(&mut t.cert, flags.cert_tol);
    set(&mut t.dd, flags.dd_tol);
    t.validate()?;
    Ok(t)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(2, format!("{}: {e}", path.display())))
}

fn read_matrix(path: &Path, tol: &Tolerances64) -> Result<HermitianMatrix64, Failure> {
    io::parse_matrix(&read(path)?, tol).map_err(|e| fail(2, format!("{}: {e}", path.display())))
}

fn read_decomposition(path: &Path) -> Result<io::DecompositionDoc, Failure> {
    io::parse_decomposition(&read(path)?).map_err(|e| fail(2, format!("{}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&Path>) -> CmdResult {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| fail(2, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    let tol = tolerances(&cli.tol)?;
    match cli.command {
        Command::Norms { matrix, out } => {
            let a = read_matrix(&matrix, &tol)?;
            emit(&io::render_norms(&io::norms(&a)?), out.as_deref())
        }
        Command::Decompose { matrix, method, seed, out } => {
            let a = read_matrix(&matrix, &tol)?;
            let d = decompose(&a, method, seed, &tol)?;
            let residual = d.verify(&a, tol.recon)?.residual;
            emit(&io::render_decomposition(&d, Some(residual)), out.as_deref())
        }
        Command::Gamma { matrix, functional, effort, seed, out } => {
            let a = read_matrix(&matrix, &tol)?;
            let report = match functional {
                FunctionalArg::Exact => gamma_exact_report(&a),
                FunctionalArg::Zero => gamma0_bounds(&a, &tol)?,
                FunctionalArg::Plus => {
                    let effort = match effort {
                        EffortArg::Fast => Effort::Fast,
                        EffortArg::Thorough => Effort::Thorough,
                    };
                    gamma_plus_bounds_with(&a, &BoundsConfig::new(effort).with_seed(seed), &tol)?
                }
            };
            emit(&io::render_gamma_report(&report), out.as_deref())
        }
        Command::Certify { matrix, decomposition } => {
            let a = read_matrix(&matrix, &tol)?;
            let doc = read_decomposition(&decomposition)?;
            let outcome = io::certify(&a, &doc, &tol);
            emit(&io::render_certify(&outcome), None)?;
            if outcome.pass {
                Ok(())
            } else {
                Err(fail(5, "decomposition does not certify the matrix"))
            }
        }
        Command::Reduce { decomposition, out } => {
            let doc = read_decomposition(&decomposition)?;
            let (d, residual) = io::reduce_document(doc, &tol).map_err(|e| match e {
                Error::DimensionMismatch { .. } | Error::ReconstructionMismatch { .. } => fail(5, e.to_string()),
                other => other.into(),
            })?;
            emit(&io::render_decomposition(&d, Some(residual)), out.as_deref())
        }
        Command::Experiment { dims, realizations, seed, methods, out, json } => {
            let cfg = EnsembleConfig {
                dims,
                realizations,
                base_seed: seed,
                methods: methods
                    .into_iter()
                    .map(|m| match m {
                        EnsembleArg::Ldl => EnsembleMethod::Ldl,
                        EnsembleArg::Eigen => EnsembleMethod::Eigen,
                        EnsembleArg::Greedy => EnsembleMethod::Greedy,
                    })
                    .collect(),
                ..EnsembleConfig::default()
            };
            let report = run_ensemble(&cfg)?;
            let mut csv = Vec::new();
            emit_csv(&report, &mut csv)?;
            let csv = String::from_utf8(csv).expect("CSV is ASCII");
            let c = report.fit.as_ref().and_then(|f| f.sqrt_coeff);
            let fit_line = match c {
                Some(c) => format!("sqrt_fit c={c}"),
                None => "sqrt_fit c=NA".to_string(),
            };
            if let Some(p) = json {
                emit(&io::render_experiment_json(&report), Some(&p))?;
            }
            match out {
                Some(p) => {
                    emit(&csv, Some(&p))?;
                    println!("{fit_line}");
                }
                None => {
                    print!("{csv}");
                    eprintln!("{fit_line}");
                }
            }
            Ok(())
        }
    }
}

fn decompose(a: &HermitianMatrix64, method: MethodArg, seed: u64, tol: &Tolerances64) -> Result<RankOneDecomposition64, Error> {
    match method {
        MethodArg::Ldl => ldl_decompose(a, tol),
        MethodArg::Eigen => eigen_decompose(a, tol),
        MethodArg::Dd => dd_decompose(a, tol),
        MethodArg::Greedy => greedy_decompose(a, &GreedyConfig { seed, ..GreedyConfig::default() }, tol),
        MethodArg::Oracle => numeric_gamma_plus_oracle(a, &OracleConfig { seed, ..OracleConfig::default() }, tol),
    }
}
