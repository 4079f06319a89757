//! One-sided Jacobi SVD and the derived rank, truncation and conditioning
//! queries.
//!
//! The kernel orthogonalises columns with plane rotations in a fixed
//! row-cyclic order `(i, j), i < j`, so results are bit-reproducible for a
//! given input. Singular vectors are normalised so that in each right singular
//! vector the first entry of largest magnitude is non-negative.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::dense::{dot, fro_norm, norm2, sign_nonzero, DenseMatrix};
use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 60;

/// Pairs whose normalised coupling `|a_iᵀa_j| / (‖a_i‖‖a_j‖)` stays below
/// this times `√rows` are considered orthogonal.
pub const JACOBI_TOL: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub struct SvdResult {
    /// `rows × r` with orthonormal columns.
    pub u: DenseMatrix,
    /// Descending, non-negative.
    pub sigma: Vec<f64>,
    /// `cols × r` with orthonormal columns.
    pub v: DenseMatrix,
}

impl SvdResult {
    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    /// `U diag(σ) Vᵀ`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let (m, n) = (self.u.rows(), self.v.rows());
        let mut out = vec![0.0; m * n];
        for (k, &s) in self.sigma.iter().enumerate() {
            let uk = self.u.col(k);
            for (j, &vjk) in self.v.col(k).iter().enumerate() {
                let w = s * vjk;
                for (o, &ui) in out[j * m..(j + 1) * m].iter_mut().zip(uk) {
                    *o += ui * w;
                }
            }
        }
        DenseMatrix::from_parts(m, n, out)
    }

    /// Keeps the leading `r` triplets.
    pub fn truncate(&self, r: usize) -> Result<SvdResult> {
        if r == 0 || r > self.sigma.len() {
            return Err(Error::range(alloc::format!("truncation rank {r} not in 1..={}", self.sigma.len())));
        }
        Ok(SvdResult { u: leading_cols(&self.u, r), sigma: self.sigma[..r].to_vec(), v: leading_cols(&self.v, r) })
    }
}

fn leading_cols(a: &DenseMatrix, r: usize) -> DenseMatrix {
    DenseMatrix::from_parts(a.rows(), r, a.as_slice()[..a.rows() * r].to_vec())
}

/// A single singular triplet `(σ, u, v)` with `A v = σ u`.
#[derive(Debug, Clone, PartialEq)]
pub struct Triplet {
    pub sigma: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

/// Relative threshold against `σ_1` used by rank decisions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankTolerance {
    rel_tol: f64,
}

impl RankTolerance {
    pub const DEFAULT: f64 = 1e-10;

    pub fn new(rel_tol: f64) -> Result<Self> {
        if rel_tol.is_finite() && rel_tol >= 0.0 {
            Ok(Self { rel_tol })
        } else {
            Err(Error::Domain("rank tolerance must be finite and non-negative"))
        }
    }

    pub fn value(&self) -> f64 {
        self.rel_tol
    }
}

impl Default for RankTolerance {
    fn default() -> Self {
        Self { rel_tol: Self::DEFAULT }
    }
}

/// 2-norm condition number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Condition {
    Finite(f64),
    /// The smallest singular value is zero to working precision.
    Singular,
}

/// Full thin SVD with `r = min(rows, cols)` triplets.
pub fn jacobi_svd(a: &DenseMatrix) -> Result<SvdResult> {
    if a.rows() >= a.cols() {
        let (mut svd, converged) = one_sided(a);
        fix_signs(&mut svd);
        finish(svd, converged)
    } else {
        let (t, converged) = one_sided(&a.transpose());
        let mut svd = SvdResult { u: t.v, sigma: t.sigma, v: t.u };
        fix_signs(&mut svd);
        finish(svd, converged)
    }
}

fn finish(svd: SvdResult, converged: Option<usize>) -> Result<SvdResult> {
    match converged {
        Some(_) => Ok(svd),
        None => Err(Error::SvdNotConverged { sweeps: MAX_SWEEPS, last: Box::new(svd) }),
    }
}

/// Hestenes iteration on a matrix with `rows >= cols`. Returns the
/// decomposition and the number of sweeps used, or `None` if the sweep cap
/// was reached.
fn one_sided(a: &DenseMatrix) -> (SvdResult, Option<usize>) {
    let (m, n) = a.shape();
    let mut w = a.clone();
    let mut v = DenseMatrix::identity(n);
    let tol = JACOBI_TOL * libm::sqrt(m as f64);
    let mut converged = None;

    for sweep in 1..=MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n.saturating_sub(1) {
            for j in i + 1..n {
                let (ci, cj) = (w.col(i), w.col(j));
                let gamma = dot(ci, cj);
                if gamma == 0.0 {
                    continue;
                }
                let alpha = dot(ci, ci);
                let beta = dot(cj, cj);
                if gamma.abs() <= tol * libm::sqrt(alpha) * libm::sqrt(beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta.abs() > 1e150 {
                    0.5 / zeta
                } else {
                    sign_nonzero(zeta) / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                rotate_cols(w.as_mut_slice(), m, i, j, c, s);
                rotate_cols(v.as_mut_slice(), n, i, j, c, s);
            }
        }
        if !rotated {
            converged = Some(sweep);
            break;
        }
    }

    let norms: Vec<f64> = (0..n).map(|j| norm2(w.col(j))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // stable: equal σ keep their column order
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));

    let mut u = DenseMatrix::zeros(m, n);
    let mut vs = DenseMatrix::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    let mut missing = Vec::new();
    for (k, &src) in order.iter().enumerate() {
        let s = norms[src];
        vs.col_mut(k).copy_from_slice(v.col(src));
        if s >= f64::MIN_POSITIVE {
            for (d, &x) in u.col_mut(k).iter_mut().zip(w.col(src)) {
                *d = x / s;
            }
            sigma.push(s);
        } else {
            sigma.push(0.0);
            missing.push(k);
        }
    }
    complete_basis(&mut u, &missing);
    (SvdResult { u, sigma, v: vs }, converged)
}

#[inline]
fn rotate_cols(data: &mut [f64], rows: usize, i: usize, j: usize, c: f64, s: f64) {
    let (left, right) = data.split_at_mut(j * rows);
    let ci = &mut left[i * rows..(i + 1) * rows];
    let cj = &mut right[..rows];
    for (x, y) in ci.iter_mut().zip(cj.iter_mut()) {
        let (xi, yj) = (*x, *y);
        *x = c * xi - s * yj;
        *y = s * xi + c * yj;
    }
}

/// Fills the listed columns of `u` (currently zero) with unit vectors
/// orthogonal to all other columns, choosing among the coordinate axes the
/// one with the largest orthogonal residual.
fn complete_basis(u: &mut DenseMatrix, missing: &[usize]) {
    if missing.is_empty() {
        return;
    }
    let (m, r) = u.shape();
    let mut filled: Vec<usize> = (0..r).filter(|k| !missing.contains(k)).collect();
    for &k in missing {
        let mut best: Option<(f64, Vec<f64>)> = None;
        for axis in 0..m {
            let mut e = vec![0.0; m];
            e[axis] = 1.0;
            for _ in 0..2 {
                for &f in &filled {
                    let proj = dot(u.col(f), &e);
                    for (x, &y) in e.iter_mut().zip(u.col(f)) {
                        *x -= proj * y;
                    }
                }
            }
            let nrm = norm2(&e);
            if best.as_ref().is_none_or(|(b, _)| nrm > *b + 1e-12) {
                best = Some((nrm, e));
            }
        }
        if let Some((nrm, e)) = best {
            for (d, x) in u.col_mut(k).iter_mut().zip(e) {
                *d = x / nrm;
            }
        }
        filled.push(k);
    }
}

/// Index of the first entry of largest magnitude.
fn pivot_index(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    best
}

fn fix_signs(svd: &mut SvdResult) {
    for k in 0..svd.sigma.len() {
        let vk = svd.v.col(k);
        if vk[pivot_index(vk)] < 0.0 {
            svd.v.col_mut(k).iter_mut().for_each(|x| *x = -*x);
            svd.u.col_mut(k).iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Best rank-`r` approximation and its Frobenius residual `√(Σ_{k>r} σ_k²)`.
pub fn truncated_svd(a: &DenseMatrix, r: usize) -> Result<(SvdResult, f64)> {
    let rmax = a.rows().min(a.cols());
    if r == 0 || r > rmax {
        return Err(Error::range(alloc::format!("truncation rank {r} not in 1..={rmax}")));
    }
    let full = jacobi_svd(a)?;
    let residual = fro_norm(&full.sigma[r..]);
    Ok((full.truncate(r)?, residual))
}

/// Diagnostics from [`power_iteration`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct PowerStats {
    pub iterations: usize,
    /// Ratio of the last two successive σ increments; approximates
    /// `(σ_2 / σ_1)²` once the iteration has settled.
    pub contraction: f64,
}

/// Leading singular triplet by alternating power iteration.
///
/// Starts from the normalised all-ones vector in the column space; if that
/// start is (numerically) orthogonal to the row space of `A` it restarts from
/// the coordinate axis of the largest row. Stops once successive σ estimates
/// differ by at most `tol · σ`.
pub fn dominant_triplet(a: &DenseMatrix, tol: f64, max_iter: usize) -> Result<Triplet> {
    power_iteration(a, tol, max_iter).map(|(t, _)| t)
}

pub(crate) fn power_iteration(a: &DenseMatrix, tol: f64, max_iter: usize) -> Result<(Triplet, PowerStats)> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain("power iteration tolerance must be positive"));
    }
    let anorm = a.fro_norm();
    if anorm == 0.0 {
        return Err(Error::Domain("dominant triplet of a zero matrix"));
    }
    let m = a.rows();
    let start = vec![1.0 / libm::sqrt(m as f64); m];
    let mut v = a.tr_matvec(&start)?;
    if norm2(&v) <= 1e-8 * anorm {
        let heaviest = (0..m)
            .map(|i| (i, (0..a.cols()).map(|j| a[(i, j)] * a[(i, j)]).sum::<f64>()))
            .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best })
            .0;
        let mut e = vec![0.0; m];
        e[heaviest] = 1.0;
        v = a.tr_matvec(&e)?;
    }

    let mut sigma_prev = 0.0;
    let mut delta_prev = f64::NAN;
    let mut contraction = 0.0;
    let mut u = vec![0.0; m];
    let mut sigma = 0.0;
    for iter in 1..=max_iter.max(1) {
        let vn = norm2(&v);
        v.iter_mut().for_each(|x| *x /= vn);
        u = a.matvec(&v)?;
        sigma = norm2(&u);
        if sigma == 0.0 {
            return Err(Error::Domain("power iteration collapsed to zero"));
        }
        u.iter_mut().for_each(|x| *x /= sigma);
        let delta = (sigma - sigma_prev).abs();
        if iter > 1 && delta_prev > 0.0 {
            contraction = delta / delta_prev;
        }
        if iter > 1 && delta <= tol * sigma {
            let mut t = Triplet { sigma, u, v };
            fix_triplet_sign(&mut t);
            return Ok((t, PowerStats { iterations: iter, contraction }));
        }
        sigma_prev = sigma;
        delta_prev = delta;
        v = a.tr_matvec(&u)?;
    }
    let mut estimate = Triplet { sigma, u, v };
    fix_triplet_sign(&mut estimate);
    Err(Error::PowerNotConverged { iterations: max_iter, estimate: Box::new(estimate) })
}

fn fix_triplet_sign(t: &mut Triplet) {
    if t.v[pivot_index(&t.v)] < 0.0 {
        t.v.iter_mut().for_each(|x| *x = -*x);
        t.u.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Number of `σ_k > rel_tol · σ_1`.
pub fn numeric_rank(sigma: &[f64], tol: RankTolerance) -> Result<usize> {
    if sigma.iter().any(|s| s.is_nan() || *s < 0.0) {
        return Err(Error::Contract("singular values must be non-negative"));
    }
    if sigma.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Contract("singular values must be sorted descending"));
    }
    let Some(&first) = sigma.first() else {
        return Ok(0);
    };
    if first == 0.0 {
        return Ok(0);
    }
    let cut = tol.value() * first;
    Ok(sigma.iter().take_while(|&&s| s > cut).count())
}

/// `σ_max / σ_min`. A smallest singular value at or below
/// `ε · max(rows, cols) · σ_max` is reported as [`Condition::Singular`].
pub fn cond2(a: &DenseMatrix) -> Result<Condition> {
    let svd = jacobi_svd(a)?;
    let smax = svd.sigma[0];
    let smin = *svd.sigma.last().unwrap_or(&0.0);
    let floor = f64::EPSILON * a.rows().max(a.cols()) as f64 * smax;
    if smax == 0.0 || smin <= floor {
        Ok(Condition::Singular)
    } else {
        Ok(Condition::Finite(smax / smin))
    }
}
