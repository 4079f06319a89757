//! Kronecker products, the vec-trick matvec, and block stacking.

use alloc::vec;
use alloc::vec::Vec;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::rearrange::BlockShape;

/// `B ⊗ C`: block `(i, j)` of the result is `B[i, j] · C`.
///
/// Every output entry is a single product, so the result is independent of
/// traversal order.
pub fn kron(b: &DenseMatrix, c: &DenseMatrix) -> Result<DenseMatrix> {
    let (m, n) = b.shape();
    let (p, q) = c.shape();
    let rows = m.checked_mul(p).ok_or(Error::SizeOverflow)?;
    let cols = n.checked_mul(q).ok_or(Error::SizeOverflow)?;
    let len = rows.checked_mul(cols).ok_or(Error::SizeOverflow)?;
    let mut out = vec![0.0; len];
    for jb in 0..n {
        let bcol = b.col(jb);
        for t in 0..q {
            let ccol = c.col(t);
            let dst = &mut out[(jb * q + t) * rows..(jb * q + t + 1) * rows];
            for (ib, &bij) in bcol.iter().enumerate() {
                for (d, &cst) in dst[ib * p..(ib + 1) * p].iter_mut().zip(ccol) {
                    *d = bij * cst;
                }
            }
        }
    }
    Ok(DenseMatrix::from_parts(rows, cols, out))
}

/// `(B ⊗ C) x` computed as `vec(C X Bᵀ)` with `X` the `q × n` reshape of `x`.
pub fn kron_matvec(b: &DenseMatrix, c: &DenseMatrix, x: &[f64]) -> Result<Vec<f64>> {
    let (m, n) = b.shape();
    let (p, q) = c.shape();
    if Some(x.len()) != n.checked_mul(q) {
        return Err(Error::shape(alloc::format!(
            "kron_matvec: ({m}x{n}) ⊗ ({p}x{q}) applied to vector of length {}",
            x.len()
        )));
    }
    // Y = C X, p × n
    let mut y = vec![0.0; p * n];
    for j in 0..n {
        let dst = &mut y[j * p..(j + 1) * p];
        for (t, &xt) in x[j * q..(j + 1) * q].iter().enumerate() {
            for (d, &cst) in dst.iter_mut().zip(c.col(t)) {
                *d += cst * xt;
            }
        }
    }
    // Z = Y Bᵀ, p × m; column i gathers Σ_j B[i, j] Y[:, j]
    let mut z = vec![0.0; p * m];
    for j in 0..n {
        let ycol = &y[j * p..(j + 1) * p];
        for (i, &bij) in b.col(j).iter().enumerate() {
            for (d, &yv) in z[i * p..(i + 1) * p].iter_mut().zip(ycol) {
                *d += bij * yv;
            }
        }
    }
    Ok(z)
}

/// `B ⊗ C` kept in factored form.
#[derive(Debug, Clone, PartialEq)]
pub struct KronOperator {
    b: DenseMatrix,
    c: DenseMatrix,
}

impl KronOperator {
    pub fn new(b: DenseMatrix, c: DenseMatrix) -> Self {
        Self { b, c }
    }

    pub fn factors(&self) -> (&DenseMatrix, &DenseMatrix) {
        (&self.b, &self.c)
    }

    /// Shape of the operator, `(mp, nq)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.b.rows() * self.c.rows(), self.b.cols() * self.c.cols())
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        kron_matvec(&self.b, &self.c, x)
    }

    /// `(B ⊗ C)ᵀ x = (Bᵀ ⊗ Cᵀ) x`.
    pub fn apply_transpose(&self, x: &[f64]) -> Result<Vec<f64>> {
        kron_matvec(&self.b.transpose(), &self.c.transpose(), x)
    }

    pub fn materialize(&self) -> Result<DenseMatrix> {
        kron(&self.b, &self.c)
    }

    pub fn fro_norm(&self) -> f64 {
        self.b.fro_norm() * self.c.fro_norm()
    }
}

/// Stacks the `p × q` blocks of `a` vertically, block `k = i + j·m` at rows
/// `[k·p, (k+1)·p)`.
pub fn blockvec(a: &DenseMatrix, shape: BlockShape) -> Result<DenseMatrix> {
    shape.check_host(a)?;
    let BlockShape { m, n, p, q } = shape;
    let rows = m * n * p;
    let mut out = vec![0.0; rows * q];
    let src = a.as_slice();
    let arows = a.rows();
    for t in 0..q {
        for j in 0..n {
            for i in 0..m {
                let k = i + j * m;
                let from = i * p + (j * q + t) * arows;
                let to = k * p + t * rows;
                out[to..to + p].copy_from_slice(&src[from..from + p]);
            }
        }
    }
    Ok(DenseMatrix::from_parts(rows, q, out))
}

/// Inverse of [`blockvec`].
pub fn blockmat(v: &DenseMatrix, shape: BlockShape) -> Result<DenseMatrix> {
    let BlockShape { m, n, p, q } = shape;
    let rows = shape.stacked_rows()?;
    if v.shape() != (rows, q) {
        return Err(Error::shape(alloc::format!(
            "blockmat: expected {rows}x{q} stacked blocks, got {}x{}",
            v.rows(),
            v.cols()
        )));
    }
    let (arows, acols) = shape.host_shape()?;
    let mut out = vec![0.0; arows * acols];
    let src = v.as_slice();
    for t in 0..q {
        for j in 0..n {
            for i in 0..m {
                let k = i + j * m;
                let to = i * p + (j * q + t) * arows;
                let from = k * p + t * rows;
                out[to..to + p].copy_from_slice(&src[from..from + p]);
            }
        }
    }
    Ok(DenseMatrix::from_parts(arows, acols, out))
}
