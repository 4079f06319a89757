//! Nearest Kronecker product, Kronecker rank, and r-term Kronecker-sum
//! approximation, all read off the SVD of the block rearrangement.

use alloc::vec::Vec;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::kron::kron;
use crate::rearrange::{rearrange, BlockShape};
use crate::svd::{jacobi_svd, numeric_rank, power_iteration, truncated_svd, RankTolerance};

const POWER_TOL: f64 = 1e-14;
const POWER_MAX_ITER: usize = 500;
/// Above this estimated `(σ_2/σ_1)²` the power-iteration stopping test is
/// too weak to trust and the full SVD is used instead.
const MAX_CONTRACTION: f64 = 0.5;

/// `Σ_k B_k ⊗ C_k` with the singular values each term came from.
#[derive(Debug, Clone, PartialEq)]
pub struct KronTermList {
    shape: BlockShape,
    terms: Vec<(DenseMatrix, DenseMatrix)>,
    sigmas: Vec<f64>,
}

impl KronTermList {
    pub fn new(shape: BlockShape, terms: Vec<(DenseMatrix, DenseMatrix)>, sigmas: Vec<f64>) -> Result<Self> {
        if terms.len() != sigmas.len() {
            return Err(Error::shape("one singular value per term"));
        }
        for (b, c) in &terms {
            if b.shape() != (shape.m, shape.n) || c.shape() != (shape.p, shape.q) {
                return Err(Error::shape(alloc::format!(
                    "term factors {}x{} and {}x{} do not match the block shape",
                    b.rows(),
                    b.cols(),
                    c.rows(),
                    c.cols()
                )));
            }
        }
        if sigmas.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Contract("term singular values must be descending"));
        }
        Ok(Self { shape, terms, sigmas })
    }

    pub fn shape(&self) -> BlockShape {
        self.shape
    }

    pub fn terms(&self) -> &[(DenseMatrix, DenseMatrix)] {
        &self.terms
    }

    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ_k kron(B_k, C_k)` as an `mp × nq` matrix.
    pub fn materialize(&self) -> Result<DenseMatrix> {
        let (rows, cols) = self.shape.host_shape()?;
        let mut acc = DenseMatrix::zeros(rows, cols);
        for (b, c) in &self.terms {
            acc = acc.add(&kron(b, c)?)?;
        }
        Ok(acc)
    }
}

/// Solution of `min ‖A − B ⊗ C‖_F`.
#[derive(Debug, Clone, PartialEq)]
pub struct NearestKron {
    pub b: DenseMatrix,
    pub c: DenseMatrix,
    /// Leading singular value of the rearrangement.
    pub sigma: f64,
    /// `‖A − B ⊗ C‖_F`, measured on the materialised product.
    pub residual: f64,
}

/// Reshapes `√σ·u` and `√σ·v` into the `m × n` and `p × q` factors.
fn fold_term(u: &[f64], v: &[f64], sigma: f64, shape: BlockShape) -> (DenseMatrix, DenseMatrix) {
    let root = libm::sqrt(sigma);
    let b = DenseMatrix::from_parts(shape.m, shape.n, u.iter().map(|x| root * x).collect());
    let c = DenseMatrix::from_parts(shape.p, shape.q, v.iter().map(|x| root * x).collect());
    (b, c)
}

/// The best single Kronecker product approximation of `a` for the given
/// block partition. Factors are balanced: `‖B‖_F = ‖C‖_F = √σ_1`.
pub fn nearest_kron(a: &DenseMatrix, shape: BlockShape) -> Result<NearestKron> {
    let t = rearrange(a, shape)?;
    if a.fro_norm() == 0.0 {
        return Err(Error::Degenerate("nearest Kronecker product of a zero matrix"));
    }
    let (sigma, u, v) = match power_iteration(&t, POWER_TOL, POWER_MAX_ITER) {
        Ok((trip, stats)) if stats.contraction <= MAX_CONTRACTION => (trip.sigma, trip.u, trip.v),
        // slow or stalled: fall back to the full decomposition
        _ => {
            let svd = jacobi_svd(&t)?;
            (svd.sigma[0], svd.u.col(0).to_vec(), svd.v.col(0).to_vec())
        }
    };
    let (b, c) = fold_term(&u, &v, sigma, shape);
    let residual = a.sub(&kron(&b, &c)?)?.fro_norm();
    Ok(NearestKron { b, c, sigma, residual })
}

/// Best `r`-term Kronecker-sum approximation from the rank-`r` truncated SVD
/// of the rearrangement. Returns the terms and `√(Σ_{k>r} σ_k²)`.
///
/// When `σ_r = σ_{r+1}` the kept terms depend on the kernel's deterministic
/// ordering.
pub fn kron_sum_approx(a: &DenseMatrix, shape: BlockShape, r: usize) -> Result<(KronTermList, f64)> {
    let t = rearrange(a, shape)?;
    let rmax = shape.max_rank();
    if r == 0 || r > rmax {
        return Err(Error::range(alloc::format!("term count {r} not in 1..={rmax}")));
    }
    let (svd, residual) = truncated_svd(&t, r)?;
    let terms = (0..r).map(|k| fold_term(svd.u.col(k), svd.v.col(k), svd.sigma[k], shape)).collect();
    let list = KronTermList { shape, terms, sigmas: svd.sigma };
    Ok((list, residual))
}

/// Singular values of the rearrangement, descending.
pub fn kron_spectrum(a: &DenseMatrix, shape: BlockShape) -> Result<Vec<f64>> {
    Ok(jacobi_svd(&rearrange(a, shape)?)?.sigma)
}

/// Numerical Kronecker rank: the number of singular values of `T(A)` above
/// the relative tolerance.
pub fn kron_rank(a: &DenseMatrix, shape: BlockShape, tol: RankTolerance) -> Result<usize> {
    numeric_rank(&kron_spectrum(a, shape)?, tol)
}
