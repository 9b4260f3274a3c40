//! Dense Hermitian matrices, their norms, and the two base factorizations
//! (Jacobi eigendecomposition and natural-order LDL) the rest of the crate
//! builds on.

mod eigen;
mod ldl;
mod matrix;
mod vector;

pub use eigen::EigenSystem;
pub(crate) use eigen::{eig_is_psd, rank_of};
pub use ldl::{ldl_factor, ldl_factor_ordered, reconstruct, verify_reconstruction, ResidualReport};
pub(crate) use ldl::residual_report;
pub use matrix::HermitianMatrix;
pub use vector::ComplexVector;
