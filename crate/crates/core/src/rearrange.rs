//! The block rearrangement `T(A)` that turns Kronecker structure into rank
//! structure, its inverse, and the order-4 tensor view of a block matrix.
//!
//! For `A` partitioned into an `m × n` grid of `p × q` blocks `A_ij`, row
//! `k = i + j·m` of `T(A)` is `vec(A_ij)ᵀ`. With this ordering
//! `T(B ⊗ C) = vec(B) vec(C)ᵀ`. Ordering rows by `j + i·n` instead would only
//! permute rows of `T(A)`, which leaves singular values and every quantity
//! derived from them unchanged.

use alloc::vec;
use alloc::vec::Vec;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::tensor::DenseTensor;

/// An `m × n` grid of `p × q` blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlockShape {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub q: usize,
}

impl BlockShape {
    pub fn new(m: usize, n: usize, p: usize, q: usize) -> Result<Self> {
        if m == 0 || n == 0 || p == 0 || q == 0 {
            return Err(Error::ZeroDimension);
        }
        let s = Self { m, n, p, q };
        s.host_shape()?;
        s.rearranged_shape()?;
        Ok(s)
    }

    /// `(m·p, n·q)`.
    pub fn host_shape(&self) -> Result<(usize, usize)> {
        let r = self.m.checked_mul(self.p).ok_or(Error::SizeOverflow)?;
        let c = self.n.checked_mul(self.q).ok_or(Error::SizeOverflow)?;
        r.checked_mul(c).ok_or(Error::SizeOverflow)?;
        Ok((r, c))
    }

    /// `(m·n, p·q)`.
    pub fn rearranged_shape(&self) -> Result<(usize, usize)> {
        let r = self.m.checked_mul(self.n).ok_or(Error::SizeOverflow)?;
        let c = self.p.checked_mul(self.q).ok_or(Error::SizeOverflow)?;
        r.checked_mul(c).ok_or(Error::SizeOverflow)?;
        Ok((r, c))
    }

    pub(crate) fn stacked_rows(&self) -> Result<usize> {
        self.m.checked_mul(self.n).and_then(|x| x.checked_mul(self.p)).ok_or(Error::SizeOverflow)
    }

    pub fn is_consistent_with(&self, a: &DenseMatrix) -> bool {
        self.host_shape().is_ok_and(|s| s == a.shape())
    }

    pub(crate) fn check_host(&self, a: &DenseMatrix) -> Result<()> {
        if self.is_consistent_with(a) {
            Ok(())
        } else {
            Err(Error::shape(alloc::format!(
                "{}x{} matrix is not a {}x{} grid of {}x{} blocks",
                a.rows(),
                a.cols(),
                self.m,
                self.n,
                self.p,
                self.q
            )))
        }
    }

    /// Number of blocks, `m·n`.
    pub fn grid_len(&self) -> usize {
        self.m * self.n
    }

    /// Entries per block, `p·q`.
    pub fn block_len(&self) -> usize {
        self.p * self.q
    }

    /// Largest admissible Kronecker rank, `min(m·n, p·q)`.
    pub fn max_rank(&self) -> usize {
        self.grid_len().min(self.block_len())
    }
}

/// `T(A)`, an `mn × pq` matrix whose row `i + j·m` is `vec(A_ij)ᵀ`.
pub fn rearrange(a: &DenseMatrix, shape: BlockShape) -> Result<DenseMatrix> {
    shape.check_host(a)?;
    let BlockShape { m, n, p, q } = shape;
    let (rows, cols) = (m * n, p * q);
    let arows = a.rows();
    let src = a.as_slice();
    let mut out = vec![0.0; rows * cols];
    for j in 0..n {
        for t in 0..q {
            let acol = &src[(j * q + t) * arows..(j * q + t + 1) * arows];
            for s in 0..p {
                let dst = &mut out[(s + t * p) * rows + j * m..(s + t * p) * rows + (j + 1) * m];
                for (i, d) in dst.iter_mut().enumerate() {
                    *d = acol[i * p + s];
                }
            }
        }
    }
    Ok(DenseMatrix::from_parts(rows, cols, out))
}

/// The unique `A` with `rearrange(A, shape) = r`.
pub fn unrearrange(r: &DenseMatrix, shape: BlockShape) -> Result<DenseMatrix> {
    let (rows, cols) = shape.rearranged_shape()?;
    if r.shape() != (rows, cols) {
        return Err(Error::shape(alloc::format!("unrearrange: expected {rows}x{cols}, got {}x{}", r.rows(), r.cols())));
    }
    let BlockShape { m, n, p, q } = shape;
    let (arows, acols) = shape.host_shape()?;
    let src = r.as_slice();
    let mut out = vec![0.0; arows * acols];
    for j in 0..n {
        for t in 0..q {
            let acol = &mut out[(j * q + t) * arows..(j * q + t + 1) * arows];
            for s in 0..p {
                let from = &src[(s + t * p) * rows + j * m..(s + t * p) * rows + (j + 1) * m];
                for (i, &v) in from.iter().enumerate() {
                    acol[i * p + s] = v;
                }
            }
        }
    }
    Ok(DenseMatrix::from_parts(arows, acols, out))
}

/// Order-4 view with entry `(s, t, i, j) = A[i·p + s, j·q + t]`.
pub fn matrix_to_tensor4(a: &DenseMatrix, shape: BlockShape) -> Result<DenseTensor> {
    shape.check_host(a)?;
    let BlockShape { m, n, p, q } = shape;
    let arows = a.rows();
    let src = a.as_slice();
    let mut out: Vec<f64> = Vec::with_capacity(a.as_slice().len());
    for j in 0..n {
        for i in 0..m {
            for t in 0..q {
                let col = (j * q + t) * arows + i * p;
                out.extend_from_slice(&src[col..col + p]);
            }
        }
    }
    Ok(DenseTensor::from_parts(vec![p, q, m, n], out))
}

/// Inverse of [`matrix_to_tensor4`].
pub fn tensor4_to_matrix(x: &DenseTensor) -> Result<DenseMatrix> {
    let &[p, q, m, n] = x.dims() else {
        return Err(Error::shape(alloc::format!("expected an order-4 tensor, got order {}", x.order())));
    };
    let shape = BlockShape::new(m, n, p, q)?;
    let (arows, acols) = shape.host_shape()?;
    let src = x.as_slice();
    let mut out = vec![0.0; arows * acols];
    let mut from = 0;
    for j in 0..n {
        for i in 0..m {
            for t in 0..q {
                let col = (j * q + t) * arows + i * p;
                out[col..col + p].copy_from_slice(&src[from..from + p]);
                from += p;
            }
        }
    }
    Ok(DenseMatrix::from_parts(arows, acols, out))
}
