use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of every operation in the crate.
///
/// Numeric payloads are carried as `f64` regardless of the scalar type the
/// computation ran in.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows} rows, row {row} has {cols} entries")]
    NotSquare { rows: usize, row: usize, cols: usize },
    #[error("matrix is empty")]
    Empty,
    #[error("matrix is not Hermitian: |a[{row}][{col}] - conj(a[{col}][{row}])| = {deviation:e}")]
    NotHermitian { row: usize, col: usize, deviation: f64 },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps (off-diagonal {off:e})")]
    EigenFailure { sweeps: usize, off: f64 },
    #[error("matrix is not positive semidefinite: {detail}")]
    NotPsd { detail: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not diagonally dominant: row {row} has margin {margin:e}")]
    NotDiagonallyDominant { row: usize, margin: f64 },
    #[error("quadratic form <Ax,x> = {quad} exceeds 1")]
    QuadFormTooLarge { quad: f64 },
    #[error("direction is annihilated by the matrix (Ax = 0)")]
    ZeroDirection,
    #[error("greedy peeling stalled at step {step}: residual trace {trace:e} did not decrease")]
    StallDetected { step: usize, trace: f64 },
    #[error("term {index} has l1 norm {norm}, expected 1")]
    NormalizationError { index: usize, norm: f64 },
    #[error("invalid weights: {detail}")]
    InvalidWeights { detail: String },
    #[error("null-space solve failed: residual {residual:e}")]
    NumericalRankFailure { residual: f64 },
    #[error("input has rank one; use the single-term decomposition")]
    RankOneInput,
    #[error("dimension {n} exceeds the oracle limit {limit}")]
    BudgetExceeded { n: usize, limit: usize },
    #[error("curve fit needs at least {needed} dimensions, got {found}")]
    InsufficientData { needed: usize, found: usize },
    #[error("decomposition does not reconstruct its target: residual {residual:e} > {tolerance:e}")]
    ReconstructionMismatch { residual: f64, tolerance: f64 },
    #[error("dimension {n}, realization {realization}: {source}")]
    Realization { n: usize, realization: usize, source: Box<Error> },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
