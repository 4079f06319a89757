//! Order-d dense tensors and column-major multi-index arithmetic.

use alloc::vec;
use alloc::vec::Vec;

use crate::dense::{check_finite, checked_len, DenseMatrix};
use crate::error::{Error, Result};

/// Dense real tensor, first index fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    dims: Vec<usize>,
    data: Vec<f64>,
}

fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::ZeroDimension);
    }
    checked_len(dims)
}

impl DenseTensor {
    pub fn new(dims: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        let expected = check_dims(&dims)?;
        if data.len() != expected {
            return Err(Error::LengthMismatch { expected, found: data.len() });
        }
        check_finite(&data)?;
        Ok(Self { dims, data })
    }

    /// # Panics
    /// If `dims` is empty or contains a zero.
    pub fn zeros(dims: &[usize]) -> Self {
        let len = check_dims(dims).expect("DenseTensor::zeros: invalid dims");
        Self { dims: dims.to_vec(), data: vec![0.0; len] }
    }

    /// Fills entries in storage order; `f` receives the multi-index.
    pub fn from_fn(dims: &[usize], mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let len = check_dims(dims)?;
        let mut idx = vec![0usize; dims.len()];
        let mut data = Vec::with_capacity(len);
        for _ in 0..len {
            data.push(f(&idx));
            increment(&mut idx, dims);
        }
        Self::new(dims.to_vec(), data)
    }

    pub(crate) fn from_parts(dims: Vec<usize>, data: Vec<f64>) -> Self {
        debug_assert_eq!(checked_len(&dims).ok(), Some(data.len()));
        Self { dims, data }
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn get(&self, idx: &[usize]) -> Result<f64> {
        Ok(self.data[linearize(idx, &self.dims)?])
    }

    pub fn fro_norm(&self) -> f64 {
        crate::dense::fro_norm(&self.data)
    }

    /// Same storage under new dimensions.
    pub fn reshape(self, dims: Vec<usize>) -> Result<Self> {
        let expected = check_dims(&dims)?;
        if expected != self.data.len() {
            return Err(Error::LengthMismatch { expected, found: self.data.len() });
        }
        Ok(Self { dims, data: self.data })
    }

    /// Order-2 tensors only.
    pub fn to_matrix(&self) -> Result<DenseMatrix> {
        match self.dims[..] {
            [r, c] => Ok(DenseMatrix::from_parts(r, c, self.data.clone())),
            _ => Err(Error::shape(alloc::format!("order-{} tensor is not a matrix", self.order()))),
        }
    }

    pub fn into_matrix(self) -> Result<DenseMatrix> {
        match self.dims[..] {
            [r, c] => Ok(DenseMatrix::from_parts(r, c, self.data)),
            _ => Err(Error::shape(alloc::format!("order-{} tensor is not a matrix", self.order()))),
        }
    }
}

impl From<DenseMatrix> for DenseTensor {
    fn from(m: DenseMatrix) -> Self {
        let (r, c) = m.shape();
        Self::from_parts(vec![r, c], m.into_vec())
    }
}

/// Advances `idx` one step in column-major order, wrapping to all zeros.
#[inline]
pub(crate) fn increment(idx: &mut [usize], bounds: &[usize]) {
    for (i, &n) in idx.iter_mut().zip(bounds) {
        *i += 1;
        if *i < n {
            return;
        }
        *i = 0;
    }
}

/// Column-major rank of `idx`: `Σ_k i_k Π_{j<k} n_j`.
pub fn linearize(idx: &[usize], bounds: &[usize]) -> Result<usize> {
    if idx.len() != bounds.len() {
        return Err(Error::shape(alloc::format!(
            "index of order {} against bounds of order {}",
            idx.len(),
            bounds.len()
        )));
    }
    let mut lin = 0usize;
    let mut stride = 1usize;
    for (k, (&i, &n)) in idx.iter().zip(bounds).enumerate() {
        if i >= n {
            return Err(Error::range(alloc::format!("index {i} >= bound {n} in position {k}")));
        }
        lin += i * stride;
        stride *= n;
    }
    Ok(lin)
}

/// Inverse of [`linearize`].
pub fn delinearize(lin: usize, bounds: &[usize]) -> Result<Vec<usize>> {
    let total = check_dims(bounds)?;
    if lin >= total {
        return Err(Error::range(alloc::format!("linear index {lin} >= {total}")));
    }
    let mut rest = lin;
    Ok(bounds
        .iter()
        .map(|&n| {
            let i = rest % n;
            rest /= n;
            i
        })
        .collect())
}

/// A point of `Z^d` together with the box `0 ≤ i_k < n_k` it lives in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiIndex {
    entries: Vec<usize>,
    bounds: Vec<usize>,
}

impl MultiIndex {
    pub fn new(entries: Vec<usize>, bounds: Vec<usize>) -> Result<Self> {
        check_dims(&bounds)?;
        linearize(&entries, &bounds)?;
        Ok(Self { entries, bounds })
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn bounds(&self) -> &[usize] {
        &self.bounds
    }

    pub fn linearize(&self) -> usize {
        // bounds were validated at construction
        linearize(&self.entries, &self.bounds).unwrap_or_default()
    }

    pub fn delinearize(lin: usize, bounds: &[usize]) -> Result<Self> {
        let entries = delinearize(lin, bounds)?;
        Ok(Self { entries, bounds: bounds.to_vec() })
    }
}
