use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

use crate::svd::{SvdResult, Triplet};

/// Errors produced by the numeric core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A matrix or tensor was requested with a zero extent.
    ZeroDimension,
    /// Storage length does not match the product of the dimensions.
    LengthMismatch { expected: usize, found: usize },
    /// A constructor was handed NaN or an infinity.
    NonFinite { index: usize },
    /// Operand shapes do not conform.
    Shape(String),
    /// An index, mode, rank or count lies outside its admissible range.
    OutOfRange(String),
    /// The size of a result does not fit in `usize`.
    SizeOverflow,
    /// Argument outside the mathematical domain of the operation.
    Domain(&'static str),
    /// Input for which the result is not uniquely defined (e.g. NKP of zero).
    Degenerate(&'static str),
    /// A documented precondition on the argument was violated.
    Contract(&'static str),
    /// Jacobi sweeps did not settle; carries the last iterate.
    SvdNotConverged { sweeps: usize, last: Box<SvdResult> },
    /// Power iteration hit its iteration cap; carries the current estimate.
    PowerNotConverged { iterations: usize, estimate: Box<Triplet> },
}

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Shape,
    Input,
    Numeric,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::ZeroDimension
            | Error::LengthMismatch { .. }
            | Error::Shape(_)
            | Error::OutOfRange(_)
            | Error::SizeOverflow => ErrorKind::Shape,
            Error::NonFinite { .. } | Error::Contract(_) => ErrorKind::Input,
            Error::Domain(_)
            | Error::Degenerate(_)
            | Error::SvdNotConverged { .. }
            | Error::PowerNotConverged { .. } => ErrorKind::Numeric,
        }
    }

    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::OutOfRange(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroDimension => f.write_str("zero-sized dimension"),
            Error::LengthMismatch { expected, found } => {
                write!(f, "expected {expected} values, found {found}")
            }
            Error::NonFinite { index } => write!(f, "non-finite value at position {index}"),
            Error::Shape(msg) => write!(f, "shape mismatch: {msg}"),
            Error::OutOfRange(msg) => write!(f, "out of range: {msg}"),
            Error::SizeOverflow => f.write_str("result size overflows usize"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Degenerate(msg) => write!(f, "degenerate input: {msg}"),
            Error::Contract(msg) => write!(f, "contract violated: {msg}"),
            Error::SvdNotConverged { sweeps, .. } => {
                write!(f, "Jacobi SVD did not converge after {sweeps} sweeps")
            }
            Error::PowerNotConverged { iterations, .. } => {
                write!(f, "power iteration did not converge after {iterations} iterations")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
