//! Rank-one decompositions of Hermitian positive-semidefinite matrices that
//! minimize `sum_k ||g_k||_1^2`, the bracketing functionals around that
//! minimum, and a Monte-Carlo harness for random Gram ensembles.
//!
//! The numeric core is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the common double-precision instantiations.

pub mod decompose;
pub mod error;
pub mod experiments;
pub mod gamma;
pub mod hermitian;
pub mod io;
pub mod scalar;
pub mod tolerance;

pub use decompose::{
    caratheodory_reduce, dd_decompose, eigen_decompose, greedy_decompose, is_diagonally_dominant,
    ldl_decompose, rank_one_peel, reduce_decomposition, special_3x3_gap, structured_cost_check,
    DominanceReport, GreedyConfig, Method, PeelStep, RankOneDecomposition,
};
pub use error::{Error, Result};
pub use gamma::{
    gamma0_bounds, gamma_exact, gamma_exact_report, gamma_plus_bounds, gamma_plus_bounds_with, inequality_report,
    numeric_gamma_plus_oracle, omega_membership, BoundsConfig, Certificate, Effort, Functional,
    GammaReport, InequalityReport, Membership, MixedDecomposition, OracleConfig,
    SignedDecomposition,
};
pub use hermitian::{
    ldl_factor, reconstruct, verify_reconstruction, ComplexVector, EigenSystem, HermitianMatrix,
    ResidualReport,
};
pub use scalar::Real;
pub use tolerance::Tolerances;

pub type Complex64 = num_complex::Complex<f64>;

pub type HermitianMatrix64 = HermitianMatrix<f64>;
pub type HermitianMatrix32 = HermitianMatrix<f32>;
pub type ComplexVector64 = ComplexVector<f64>;
pub type ComplexVector32 = ComplexVector<f32>;
pub type EigenSystem64 = EigenSystem<f64>;
pub type RankOneDecomposition64 = RankOneDecomposition<f64>;
pub type RankOneDecomposition32 = RankOneDecomposition<f32>;
pub type SignedDecomposition64 = SignedDecomposition<f64>;
pub type GammaReport64 = GammaReport<f64>;
pub type Tolerances64 = Tolerances<f64>;
