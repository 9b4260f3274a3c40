use crate::decompose::{require_psd, Method, RankOneDecomposition};
use crate::error::{Error, Result};
use crate::hermitian::{ldl_factor, ComplexVector, HermitianMatrix};
use crate::scalar::{creal, Real};
use crate::tolerance::Tolerances;

/// Natural-order LDL factors as a decomposition; at most `n` vectors.
pub fn ldl_decompose<R: Real>(a: &HermitianMatrix<R>, tol: &Tolerances<R>) -> Result<RankOneDecomposition<R>> {
    let vectors = ldl_factor(a, tol.pivot)?;
    RankOneDecomposition::new(a, vectors, Method::Ldl, tol.recon).map_err(|e| match e {
        Error::ReconstructionMismatch { residual, .. } => Error::NotPsd {
            detail: format!("LDL residual {residual:e} after dropping negligible pivots"),
        },
        other => other,
    })
}

/// `g_k = sqrt(lambda_k) v_k` over eigenvalues above `psd * max(1, ||A||_op)`.
pub fn eigen_decompose<R: Real>(a: &HermitianMatrix<R>, tol: &Tolerances<R>) -> Result<RankOneDecomposition<R>> {
    let eig = require_psd(a, tol)?;
    let cut = tol.psd * R::one().max(eig.max_abs_eigenvalue());
    let vectors = eig
        .pairs()
        .filter(|(l, _)| *l > cut)
        .map(|(l, v)| v.scale(l.sqrt()))
        .collect();
    RankOneDecomposition::new(a, vectors, Method::Eigen, tol.recon)
}

/// Per-row diagonal-dominance margins `A_ii - sum_{j != i} |A_ij|`.
#[derive(Debug, Clone, PartialEq)]
pub struct DominanceReport<R> {
    pub dominant: bool,
    pub margins: Vec<R>,
    pub worst_row: usize,
}

impl<R: Real> DominanceReport<R> {
    pub fn worst_margin(&self) -> R {
        self.margins.get(self.worst_row).copied().unwrap_or_else(R::zero)
    }
}

pub fn is_diagonally_dominant<R: Real>(a: &HermitianMatrix<R>, dd_tol: R) -> DominanceReport<R> {
    let n = a.n();
    let margins: Vec<R> = (0..n)
        .map(|i| {
            let off: R = (0..n).filter(|&j| j != i).map(|j| a.get(i, j).norm()).sum();
            a.get(i, i).re - off
        })
        .collect();
    let worst_row = (0..n)
        .min_by(|&i, &j| margins[i].partial_cmp(&margins[j]).unwrap_or(std::cmp::Ordering::Equal))
        .unwrap_or(0);
    let dominant = margins.iter().all(|&m| m >= -dd_tol);
    DominanceReport { dominant, margins, worst_row }
}

/// Closed-form decomposition of a diagonally dominant matrix:
/// one two-sparse term `u_ij` per non-zero off-diagonal entry, carrying
/// `sqrt(A_ij)` at `i` and `conj(sqrt(A_ij))` at `j` (principal root), plus
/// `sqrt(margin_i) e_i` for every positive row margin. Cost is `||A||_{1,1}`.
pub fn dd_decompose<R: Real>(a: &HermitianMatrix<R>, tol: &Tolerances<R>) -> Result<RankOneDecomposition<R>> {
    let rep = is_diagonally_dominant(a, tol.dd);
    if !rep.dominant {
        return Err(Error::NotDiagonallyDominant {
            row: rep.worst_row,
            margin: rep.worst_margin().as_f64(),
        });
    }
    let n = a.n();
    let mut vectors = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let x = a.get(i, j);
            if x.norm() == R::zero() {
                continue;
            }
            let root = x.sqrt();
            let mut u = ComplexVector::zeros(n);
            u[i] = root;
            u[j] = root.conj();
            vectors.push(u);
        }
    }
    let cut = tol.psd * R::one().max(a.max_diag());
    for (i, &m) in rep.margins.iter().enumerate() {
        if m > cut {
            let mut v = ComplexVector::zeros(n);
            v[i] = creal(m.sqrt());
            vectors.push(v);
        }
    }
    RankOneDecomposition::new(a, vectors, Method::Dd, tol.recon)
}
