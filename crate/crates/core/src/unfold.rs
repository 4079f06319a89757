//! Mode-k unfoldings, mode products, multilinear rank and truncated HOSVD.
//!
//! Column `c` of the mode-`k` unfolding is the fiber at the multi-index whose
//! remaining coordinates (ascending mode order) linearize to `c`. Mode 0 is
//! therefore the storage of the tensor read as an `n_0 × (N / n_0)` matrix.

use alloc::vec;
use alloc::vec::Vec;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::svd::{jacobi_svd, numeric_rank, RankTolerance};
use crate::tensor::DenseTensor;

#[derive(Debug, Clone, PartialEq)]
pub struct ModeUnfolding {
    mode: usize,
    matrix: DenseMatrix,
    source_dims: Vec<usize>,
}

/// `(Π_{j<k} n_j, Π_{j>k} n_j)`.
fn strides(dims: &[usize], k: usize) -> (usize, usize) {
    (dims[..k].iter().product(), dims[k + 1..].iter().product())
}

fn check_mode(order: usize, k: usize) -> Result<()> {
    if k < order {
        Ok(())
    } else {
        Err(Error::range(alloc::format!("mode {k} of an order-{order} tensor")))
    }
}

impl ModeUnfolding {
    pub fn new(mode: usize, matrix: DenseMatrix, source_dims: Vec<usize>) -> Result<Self> {
        check_mode(source_dims.len(), mode)?;
        let (left, right) = strides(&source_dims, mode);
        if matrix.shape() != (source_dims[mode], left * right) {
            return Err(Error::shape(alloc::format!(
                "{}x{} matrix cannot be mode {mode} of a tensor with dims {:?}",
                matrix.rows(),
                matrix.cols(),
                source_dims
            )));
        }
        Ok(Self { mode, matrix, source_dims })
    }

    pub fn mode(&self) -> usize {
        self.mode
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.matrix
    }

    pub fn source_dims(&self) -> &[usize] {
        &self.source_dims
    }
}

pub fn mode_unfold(x: &DenseTensor, k: usize) -> Result<ModeUnfolding> {
    let dims = x.dims();
    check_mode(dims.len(), k)?;
    let nk = dims[k];
    let (left, right) = strides(dims, k);
    let src = x.as_slice();
    let mut out = vec![0.0; src.len()];
    for b in 0..right {
        for a in 0..left {
            let col = a + b * left;
            let base = a + b * left * nk;
            for i in 0..nk {
                out[i + col * nk] = src[base + i * left];
            }
        }
    }
    Ok(ModeUnfolding { mode: k, matrix: DenseMatrix::from_parts(nk, left * right, out), source_dims: dims.to_vec() })
}

/// Inverse of [`mode_unfold`].
pub fn mode_fold(unf: &ModeUnfolding) -> Result<DenseTensor> {
    let dims = &unf.source_dims;
    let k = unf.mode;
    check_mode(dims.len(), k)?;
    let nk = dims[k];
    let (left, right) = strides(dims, k);
    if unf.matrix.shape() != (nk, left * right) {
        return Err(Error::shape("unfolding matrix does not match its source dims"));
    }
    let src = unf.matrix.as_slice();
    let mut out = vec![0.0; src.len()];
    for b in 0..right {
        for a in 0..left {
            let col = a + b * left;
            let base = a + b * left * nk;
            for i in 0..nk {
                out[base + i * left] = src[i + col * nk];
            }
        }
    }
    Ok(DenseTensor::from_parts(dims.clone(), out))
}

/// `X ×_k M`: every mode-`k` fiber is multiplied by `M` (`r × n_k`).
pub fn mode_mult(x: &DenseTensor, mat: &DenseMatrix, k: usize) -> Result<DenseTensor> {
    let unf = mode_unfold(x, k)?;
    if mat.cols() != x.dims()[k] {
        return Err(Error::shape(alloc::format!(
            "mode-{k} product: {}x{} matrix against dimension {}",
            mat.rows(),
            mat.cols(),
            x.dims()[k]
        )));
    }
    let product = mat.matmul(unf.matrix())?;
    let mut dims = x.dims().to_vec();
    dims[k] = mat.rows();
    mode_fold(&ModeUnfolding { mode: k, matrix: product, source_dims: dims })
}

/// Singular values of every mode unfolding.
pub fn mode_spectra(x: &DenseTensor) -> Result<Vec<Vec<f64>>> {
    (0..x.order()).map(|k| Ok(jacobi_svd(mode_unfold(x, k)?.matrix())?.sigma)).collect()
}

/// `(rank M_0, …, rank M_{d-1})` over the mode unfoldings.
pub fn multilinear_rank(x: &DenseTensor, tol: RankTolerance) -> Result<Vec<usize>> {
    mode_spectra(x)?.iter().map(|s| numeric_rank(s, tol)).collect()
}

/// Truncated higher-order SVD.
#[derive(Debug, Clone, PartialEq)]
pub struct Hosvd {
    /// `r_1 × … × r_d`.
    pub core: DenseTensor,
    /// `n_k × r_k`, orthonormal columns.
    pub factors: Vec<DenseMatrix>,
    /// Full singular spectrum of each mode unfolding.
    pub mode_sigmas: Vec<Vec<f64>>,
    /// `‖X − core ×_1 U_1 ⋯ ×_d U_d‖_F`.
    pub error: f64,
}

impl Hosvd {
    pub fn reconstruct(&self) -> Result<DenseTensor> {
        self.factors.iter().enumerate().try_fold(self.core.clone(), |acc, (k, u)| mode_mult(&acc, u, k))
    }

    /// `√(Σ_{j>r_k} σ_j²)` for each mode.
    pub fn mode_tails(&self) -> Vec<f64> {
        self.mode_sigmas
            .iter()
            .zip(&self.factors)
            .map(|(s, u)| crate::dense::fro_norm(s.get(u.cols()..).unwrap_or(&[])))
            .collect()
    }
}

/// Sequential truncated HOSVD: leading `r_k` left singular vectors of each
/// unfolding, core by projecting onto all factors at once.
pub fn hosvd(x: &DenseTensor, target: &[usize]) -> Result<Hosvd> {
    let dims = x.dims();
    if target.len() != dims.len() {
        return Err(Error::range(alloc::format!(
            "target has {} entries for an order-{} tensor",
            target.len(),
            dims.len()
        )));
    }
    if let Some(k) = (0..dims.len()).find(|&k| target[k] == 0 || target[k] > dims[k]) {
        return Err(Error::range(alloc::format!("target rank {} for mode {k} not in 1..={}", target[k], dims[k])));
    }

    let mut factors = Vec::with_capacity(dims.len());
    let mut mode_sigmas = Vec::with_capacity(dims.len());
    for (k, &r) in target.iter().enumerate() {
        let unf = mode_unfold(x, k)?.into_matrix();
        let nk = unf.rows();
        // a short-and-wide unfolding has only `cols` left vectors; pad with
        // zero columns so the full n_k-dimensional basis is available
        let padded = if unf.cols() < nk {
            let mut data = unf.as_slice().to_vec();
            data.resize(nk * nk, 0.0);
            DenseMatrix::from_parts(nk, nk, data)
        } else {
            unf
        };
        let svd = jacobi_svd(&padded)?;
        factors.push(DenseMatrix::from_parts(nk, r, svd.u.as_slice()[..nk * r].to_vec()));
        let mut s = svd.sigma;
        s.truncate(dims[k].min(x.len() / dims[k]));
        mode_sigmas.push(s);
    }

    let core = factors.iter().enumerate().try_fold(x.clone(), |acc, (k, u)| mode_mult(&acc, &u.transpose(), k))?;
    let mut out = Hosvd { core, factors, mode_sigmas, error: 0.0 };
    let recon = out.reconstruct()?;
    let diff: Vec<f64> = x.as_slice().iter().zip(recon.as_slice()).map(|(a, b)| a - b).collect();
    out.error = crate::dense::fro_norm(&diff);
    Ok(out)
}
