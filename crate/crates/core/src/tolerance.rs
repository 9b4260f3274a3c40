//! Numeric thresholds used across the crate.
//!
//! Every threshold is applied against a matrix scale chosen per operation:
//!
//! | field       | default | compared against                                  |
//! |-------------|---------|---------------------------------------------------|
//! | `hermitian` | 1e-10   | `max |a_ij - conj(a_ji)|` (absolute)              |
//! | `psd`       | 1e-10   | `lambda_min / max(1, ||A||_op)`                   |
//! | `pivot`     | 1e-12   | LDL pivot `/ max(1, max_i A_ii)`                  |
//! | `recon`     | 1e-9    | max entry residual `/ max(1, max |A_ij|)`         |
//! | `eig_off`   | 1e-12   | off-diagonal Frobenius mass `/ ||A||_Fr`          |
//! | `rank`      | 1e-8    | eigenvalue `/ ||A||_op` when counting rank        |
//! | `cert`      | 1e-6    | `upper - lower` (absolute) for certification      |
//! | `dd`        | 1e-12   | diagonal-dominance margin (absolute)              |
//!
//! In single precision each default is raised to a small multiple of machine
//! epsilon so the checks stay satisfiable.

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<R> {
    pub hermitian: R,
    pub psd: R,
    pub pivot: R,
    pub recon: R,
    pub eig_off: R,
    pub eig_sweeps: usize,
    pub rank: R,
    pub cert: R,
    pub dd: R,
}

impl<R: Real> Default for Tolerances<R> {
    fn default() -> Self {
        Tolerances {
            hermitian: R::tol_floor(1e-10, 1e3),
            psd: R::tol_floor(1e-10, 1e3),
            pivot: R::tol_floor(1e-12, 1e2),
            recon: R::tol_floor(1e-9, 1e4),
            eig_off: R::tol_floor(1e-12, 1e1),
            eig_sweeps: 100,
            rank: R::tol_floor(1e-8, 1e4),
            cert: R::tol_floor(1e-6, 1e4),
            dd: R::tol_floor(1e-12, 1e2),
        }
    }
}

impl<R: Real> Tolerances<R> {
    /// Rejects non-positive or non-finite overrides.
    pub fn validate(&self) -> crate::Result<()> {
        let fields = [
            ("hermitian", self.hermitian),
            ("psd", self.psd),
            ("pivot", self.pivot),
            ("recon", self.recon),
            ("eig_off", self.eig_off),
            ("rank", self.rank),
            ("cert", self.cert),
            ("dd", self.dd),
        ];
        for (name, v) in fields {
            if !(v > R::zero()) || !v.is_finite() {
                return Err(crate::Error::InvalidConfig(format!(
                    "tolerance `{name}` must be positive and finite, got {v}"
                )));
            }
        }
        if self.eig_sweeps == 0 {
            return Err(crate::Error::InvalidConfig("eig_sweeps must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_precision_defaults_are_the_documented_values() {
        let t = Tolerances::<f64>::default();
        assert_eq!(t.hermitian, 1e-10);
        assert_eq!(t.psd, 1e-10);
        assert_eq!(t.pivot, 1e-12);
        assert_eq!(t.recon, 1e-9);
        assert_eq!(t.eig_off, 1e-12);
        assert_eq!(t.eig_sweeps, 100);
        assert_eq!(t.cert, 1e-6);
        t.validate().unwrap();
    }

    #[test]
    fn single_precision_defaults_sit_above_epsilon() {
        let t = Tolerances::<f32>::default();
        assert!(t.pivot > f32::EPSILON);
        assert!(t.eig_off > f32::EPSILON);
    }

    #[test]
    fn rejects_non_positive_override() {
        let t = Tolerances::<f64> { psd: 0.0, ..Default::default() };
        assert!(t.validate().is_err());
    }
}
