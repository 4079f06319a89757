//! Dense Kronecker-structured linear algebra without the standard library.
//!
//! Everything here is pure computation over column-major `f64` storage and
//! needs only `alloc`:
//!
//! * [`dense`] and [`tensor`]: matrices, order-d tensors, multi-indices,
//!   `vec`, `sym`, `sgn` and norms.
//! * [`kron`]: Kronecker products, the vec-trick matvec, block stacking.
//! * [`rearrange`]: the block rearrangement `T(A)` with
//!   `T(B ⊗ C) = vec(B) vec(C)ᵀ`, and the order-4 view of a block matrix.
//! * [`svd`]: a deterministic one-sided Jacobi SVD plus truncation, power
//!   iteration, numerical rank and `κ₂`.
//! * [`nkp`]: nearest Kronecker product, Kronecker rank, Kronecker sums.
//! * [`unfold`]: mode unfoldings, mode products, multilinear rank, HOSVD.
//!
//! All indices are 0-based. Modes `0..d` correspond to the 1-based modes
//! `1..=d` of the usual tensor notation.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod dense;
pub mod error;
pub mod kron;
pub mod nkp;
pub mod rearrange;
pub mod svd;
pub mod tensor;
pub mod unfold;

pub use dense::{fro_norm, sgn, sym, vec, DenseMatrix};
pub use error::{Error, ErrorKind, Result};
pub use kron::{blockmat, blockvec, kron, kron_matvec, KronOperator};
pub use nkp::{kron_rank, kron_spectrum, kron_sum_approx, nearest_kron, KronTermList, NearestKron};
pub use rearrange::{matrix_to_tensor4, rearrange, tensor4_to_matrix, unrearrange, BlockShape};
pub use svd::{
    cond2, dominant_triplet, jacobi_svd, numeric_rank, truncated_svd, Condition, RankTolerance, SvdResult, Triplet,
};
pub use tensor::{delinearize, linearize, DenseTensor, MultiIndex};
pub use unfold::{hosvd, mode_fold, mode_mult, mode_spectra, mode_unfold, multilinear_rank, Hosvd, ModeUnfolding};
