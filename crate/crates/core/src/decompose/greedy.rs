//! Greedy peeling: repeatedly choose `x` on the surface `<Rx, x> = 1` of the
//! current residual `R`, peel `y = R x`, and recurse on `R - y y*`. Each peel
//! lowers the rank by one, so at most `rank(A)` steps are taken.
//!
//! A step scores a direction by `||y||_1^2 + ||R - y y*||_{1,1}`: the cost
//! paid now plus the cheapest conceivable cost of the remainder. Directions
//! are refined by derivative-free coordinate descent from pivot seeds
//! `e_i / sqrt(R_ii)` (exactly the permuted-LDL steps) and random complex
//! seeds.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::decompose::{best_of, peel::rank_one_peel, require_psd, Method, RankOneDecomposition};
use crate::error::{Error, Result};
use crate::experiments::gaussian_pair;
use crate::hermitian::{ldl_factor, ldl_factor_ordered, rank_of, ComplexVector, HermitianMatrix};
use crate::scalar::Real;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct GreedyConfig {
    /// Independent descents; restart 0 uses pivot seeds only.
    pub restarts: usize,
    /// Random seed directions per step for restarts after the first.
    pub random_directions: usize,
    /// Coordinate-descent passes per seed.
    pub max_iterations: usize,
    /// `sqrt(|z|^2 + eps^2)` stands in for `|z|` inside the score.
    pub smoothing: f64,
    /// Up to this dimension every pivot order of LDL is tried as an incumbent;
    /// above it the pivot order is chosen greedily.
    pub exhaustive_pivot_limit: usize,
    pub seed: u64,
}

impl Default for GreedyConfig {
    fn default() -> Self {
        GreedyConfig {
            restarts: 16,
            random_directions: 4,
            max_iterations: 200,
            smoothing: 1e-8,
            exhaustive_pivot_limit: 6,
            seed: 0,
        }
    }
}

impl GreedyConfig {
    /// Cheaper settings for bulk property runs.
    pub fn light() -> Self {
        GreedyConfig { restarts: 2, random_directions: 2, max_iterations: 60, ..Default::default() }
    }
}

pub fn greedy_decompose<R: Real>(
    a: &HermitianMatrix<R>,
    cfg: &GreedyConfig,
    tol: &Tolerances<R>,
) -> Result<RankOneDecomposition<R>> {
    let eig = require_psd(a, tol)?;
    let rank = rank_of(&eig, tol.rank);
    let incumbent = best_permuted_ldl(a, cfg.exhaustive_pivot_limit, tol)?;
    let runs: Vec<Result<RankOneDecomposition<R>>> =
        (0..cfg.restarts.max(1)).into_par_iter().map(|r| descend(a, rank, cfg, r as u64, tol)).collect();
    let mut stall = None;
    let mut found = vec![incumbent];
    for run in runs {
        match run {
            Ok(d) => found.push(d),
            Err(e @ Error::StallDetected { .. }) => stall = Some(e),
            Err(e) => return Err(e),
        }
    }
    if found.len() == 1 {
        if let Some(e) = stall {
            return Err(e);
        }
    }
    Ok(best_of(found).expect("non-empty").with_method(Method::Greedy))
}

/// Cheapest LDL over pivot orders: exhaustive up to `limit`, otherwise the
/// order picked step by step with the greedy score.
pub fn best_permuted_ldl<R: Real>(
    a: &HermitianMatrix<R>,
    limit: usize,
    tol: &Tolerances<R>,
) -> Result<RankOneDecomposition<R>> {
    let n = a.n();
    let orders = if n <= limit { permutations(n) } else { vec![greedy_pivot_order(a, tol)] };
    let mut best: Option<RankOneDecomposition<R>> = None;
    let mut last_err = None;
    for order in orders {
        match ldl_factor_ordered(a, &order, tol.pivot)
            .and_then(|vs| RankOneDecomposition::new(a, vs, Method::Ldl, tol.recon))
        {
            Ok(d) => {
                if best.as_ref().map_or(true, |b| d.quality_cmp(b).is_lt()) {
                    best = Some(d);
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    best.ok_or_else(|| last_err.unwrap_or(Error::NotPsd { detail: "no pivot order succeeded".into() }))
}

fn greedy_pivot_order<R: Real>(a: &HermitianMatrix<R>, tol: &Tolerances<R>) -> Vec<usize> {
    let n = a.n();
    let cut = tol.pivot * unit(a);
    let eps = R::zero();
    let mut r = a.clone();
    let mut left: Vec<usize> = (0..n).collect();
    let mut order = Vec::with_capacity(n);
    while !left.is_empty() {
        let mut pick = (0, None::<R>);
        for (slot, &i) in left.iter().enumerate() {
            let d = r.get(i, i).re;
            if d <= cut {
                continue;
            }
            let x = ComplexVector::basis(n, i).scale(R::one() / d.sqrt());
            let f = score(&r, &r.mul_vec(&x), eps, R::one());
            if pick.1.map_or(true, |b| f < b) {
                pick = (slot, Some(f));
            }
        }
        let i = left.remove(pick.0);
        let d = r.get(i, i).re;
        if d > cut {
            let y = r.column(i).scale(R::one() / d.sqrt());
            r.sub_outer(&y);
        }
        order.push(i);
    }
    order
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// Magnitude used to make thresholds relative, so the search commutes with scaling.
fn unit<R: Real>(r: &HermitianMatrix<R>) -> R {
    let m = r.max_abs_entry();
    if m > R::zero() { m } else { R::one() }
}

/// `(sum_i s(y_i))^2 + sum_ij s(R_ij - y_i conj(y_j))` with `s(z) = sqrt(|z|^2 + eps^2)`,
/// `eps` measured relative to `u` for the matrix terms and `sqrt(u)` for `y`.
fn score<R: Real>(r: &HermitianMatrix<R>, y: &ComplexVector<R>, eps: R, u: R) -> R {
    let ey = eps * eps * u;
    let er = ey * u;
    let sy = |z: Complex<R>| (z.norm_sqr() + ey).sqrt();
    let s = |z: Complex<R>| (z.norm_sqr() + er).sqrt();
    let l1: R = y.iter().map(|&z| sy(z)).sum();
    let n = r.n();
    let mut rest = R::zero();
    for i in 0..n {
        rest = rest + s(r.get(i, i) - Complex::new(y[i].norm_sqr(), R::zero()));
        for j in (i + 1)..n {
            rest = rest + R::lit(2.0) * s(r.get(i, j) - y[i] * y[j].conj());
        }
    }
    l1 * l1 + rest
}

/// `x / sqrt(<Rx, x>)` together with `R x` after scaling. Directions close
/// to the null space of `R` are refused: there `<Rx, x>` has few correct
/// digits and the peel would not be PSD.
fn on_surface<R: Real>(r: &HermitianMatrix<R>, x: &ComplexVector<R>) -> Option<(ComplexVector<R>, ComplexVector<R>)> {
    let y = r.mul_vec(x);
    normalize(x, y, unit(r))
}

fn normalize<R: Real>(
    x: &ComplexVector<R>,
    y: ComplexVector<R>,
    r_scale: R,
) -> Option<(ComplexVector<R>, ComplexVector<R>)> {
    let q = y.inner(x).re;
    let floor = R::lit(1e-8).max(R::epsilon().sqrt());
    if !(q > floor * r_scale * x.l2_norm().powi(2)) {
        return None;
    }
    let s = R::one() / q.sqrt();
    Some((x.scale(s), y.scale(s)))
}

/// Coordinate descent over the real and imaginary parts of `x`, staying on
/// the surface. A step along coordinate `c` moves `R x` by a multiple of
/// column `c`, so trials cost `O(n)` before scoring.
fn refine<R: Real>(
    r: &HermitianMatrix<R>,
    x0: &ComplexVector<R>,
    cfg: &GreedyConfig,
) -> Option<(ComplexVector<R>, R)> {
    let eps = R::lit(cfg.smoothing);
    let r_scale = unit(r);
    let (mut x, mut y) = on_surface(r, x0)?;
    let mut f = score(r, &y, eps, r_scale);
    let n = x.len();
    let columns: Vec<ComplexVector<R>> = (0..n).map(|c| r.column(c)).collect();
    let mut h = R::lit(0.5) * x.linf_norm();
    let h_min = R::lit(1e-7) * x.linf_norm();
    for _ in 0..cfg.max_iterations {
        let mut improved = false;
        'scan: for c in 0..2 * n {
            let unit = if c < n { Complex::new(R::one(), R::zero()) } else { Complex::new(R::zero(), R::one()) };
            let col = &columns[c % n];
            for sign in [R::one(), -R::one()] {
                let d = unit * (sign * h);
                let mut tx = x.clone();
                tx[c % n] = tx[c % n] + d;
                let mut ty = y.clone();
                for i in 0..n {
                    ty[i] = ty[i] + col[i] * d;
                }
                if let Some((tx, ty)) = normalize(&tx, ty, r_scale) {
                    let tf = score(r, &ty, eps, r_scale);
                    if tf < f {
                        // re-anchor y on accepted moves so updates do not drift
                        let Some((ax, ay)) = on_surface(r, &tx) else { continue };
                        x = ax;
                        y = ay;
                        f = score(r, &y, eps, r_scale);
                        improved = true;
                        break 'scan;
                    }
                }
            }
        }
        if !improved {
            h = h * R::lit(0.5);
            if h < h_min {
                break;
            }
        }
    }
    Some((x, f))
}

fn descend<R: Real>(
    a: &HermitianMatrix<R>,
    rank: usize,
    cfg: &GreedyConfig,
    restart: u64,
    tol: &Tolerances<R>,
) -> Result<RankOneDecomposition<R>> {
    let n = a.n();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(restart));
    let scale = unit(a);
    let negligible = tol.recon * scale * R::lit(1e-3);
    let mut residual = a.clone();
    let mut vectors = Vec::new();
    for step in 0..rank {
        if residual.max_abs_entry() <= negligible {
            break;
        }
        let cut = tol.pivot * scale;
        let mut seeds: Vec<ComplexVector<R>> = (0..n)
            .filter(|&i| residual.get(i, i).re > cut)
            .map(|i| ComplexVector::basis(n, i))
            .collect();
        if restart > 0 {
            for _ in 0..cfg.random_directions {
                let coords = (0..n)
                    .map(|_| {
                        let (re, im) = gaussian_pair(&mut rng);
                        Complex::new(R::lit(re), R::lit(im))
                    })
                    .collect();
                seeds.push(ComplexVector::new(coords));
            }
        }
        let mut best: Option<(ComplexVector<R>, R)> = None;
        for s in &seeds {
            if let Some((x, f)) = refine(&residual, s, cfg) {
                if best.as_ref().map_or(true, |b| f < b.1) {
                    best = Some((x, f));
                }
            }
        }
        let Some((x, _)) = best else { break };
        let Some((x, _)) = on_surface(&residual, &x) else { break };
        let (peel, next) = match rank_one_peel(&residual, &x) {
            Err(Error::QuadFormTooLarge { .. }) => {
                // back off by the rounding bound on <Rx, x>
                let cond = unit(&residual) * x.l2_norm().powi(2);
                rank_one_peel(&residual, &x.scale(R::one() - R::lit(8.0) * R::epsilon() * cond))?
            }
            other => other?,
        };
        if !(next.trace() < residual.trace()) {
            return Err(Error::StallDetected { step, trace: next.trace().as_f64() });
        }
        vectors.push(peel.y);
        residual = next;
    }
    if residual.max_abs_entry() > negligible {
        vectors.extend(ldl_factor(&residual, tol.pivot)?);
    }
    RankOneDecomposition::new(a, vectors, Method::Greedy, tol.recon)
}
