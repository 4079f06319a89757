//! Tensor file formats.
//!
//! # Text
//!
//! A header line followed by whitespace-separated decimal values in
//! **column-major** order. `#` starts a comment that runs to end of line.
//!
//! ```text
//! # the matrix [[1, 2], [3, 4]]
//! matrix 2 2
//! 1 3     # first column
//! 2 4     # second column
//! ```
//!
//! Order-d tensors use `tensor <d> <n_1> … <n_d>`, first index fastest.
//! Writers emit one mode-0 fiber (one matrix column) per line using the
//! shortest decimal that round-trips to the same `f64`.
//!
//! # Binary
//!
//! ```text
//! b"TEN1" | d: u32 LE | d × n_k: u64 LE | Π n_k × f64 LE (column-major)
//! ```
//!
//! A 1×1 matrix is therefore 24 bytes.

use std::fmt::Write as _;
use std::path::Path;

use kronlab_core::{DenseMatrix, DenseTensor};

pub const MAGIC: &[u8; 4] = b"TEN1";

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Text { line: usize, msg: String },
    #[error("{0}")]
    Binary(String),
}

fn text_err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Text { line, msg: msg.into() }
}

/// Header of a text file; the binary form only knows `Tensor`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Header {
    Matrix { rows: usize, cols: usize },
    Tensor { dims: Vec<usize> },
}

impl Header {
    pub fn dims(&self) -> Vec<usize> {
        match self {
            Header::Matrix { rows, cols } => vec![*rows, *cols],
            Header::Tensor { dims } => dims.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TensorFile {
    pub header: Header,
    pub tensor: DenseTensor,
}

impl TensorFile {
    /// Matrices get a `matrix` header, everything else `tensor`.
    pub fn new(tensor: DenseTensor) -> Self {
        let header = match tensor.dims() {
            &[rows, cols] => Header::Matrix { rows, cols },
            dims => Header::Tensor { dims: dims.to_vec() },
        };
        Self { header, tensor }
    }

    pub fn from_matrix(m: DenseMatrix) -> Self {
        Self::new(m.into())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match &self.header {
            Header::Matrix { rows, cols } => writeln!(out, "matrix {rows} {cols}"),
            Header::Tensor { dims } => {
                let d: Vec<String> = dims.iter().map(|n| n.to_string()).collect();
                writeln!(out, "tensor {} {}", dims.len(), d.join(" "))
            }
        }
        .expect("writing to a String");
        let fiber = self.tensor.dims()[0];
        for chunk in self.tensor.as_slice().chunks(fiber) {
            let line: Vec<String> = chunk.iter().map(|&x| format_value(x)).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn to_binary(&self) -> Vec<u8> {
        write_tensor_binary(&self.tensor)
    }
}

/// Shortest round-trip decimal, switching to exponent form for very large or
/// very small magnitudes.
pub fn format_value(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// Six significant digits, for human-facing reports.
pub fn format_short(x: f64) -> String {
    format!("{x:.5e}")
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

fn parse_count(tok: Option<&str>, line: usize, what: &str) -> Result<usize, FormatError> {
    let tok = tok.ok_or_else(|| text_err(line, format!("header is missing {what}")))?;
    match tok.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(text_err(line, format!("{what} must be a positive integer, got {tok:?}"))),
    }
}

fn parse_header(text: &str, line: usize) -> Result<Header, FormatError> {
    let mut toks = text.split_whitespace();
    let header = match toks.next() {
        Some("matrix") => Header::Matrix {
            rows: parse_count(toks.next(), line, "row count")?,
            cols: parse_count(toks.next(), line, "column count")?,
        },
        Some("tensor") => {
            let d = parse_count(toks.next(), line, "order")?;
            let dims = (0..d)
                .map(|k| parse_count(toks.next(), line, &format!("dimension {}", k + 1)))
                .collect::<Result<Vec<_>, _>>()?;
            Header::Tensor { dims }
        }
        Some(other) => return Err(text_err(line, format!("expected `matrix` or `tensor`, got {other:?}"))),
        None => unreachable!("blank lines are skipped before the header"),
    };
    if let Some(extra) = toks.next() {
        return Err(text_err(line, format!("unexpected token {extra:?} in header")));
    }
    Ok(header)
}

pub fn parse_text(src: &str) -> Result<TensorFile, FormatError> {
    let mut lines = src.lines().enumerate().map(|(i, l)| (i + 1, strip_comment(l)));
    let (hline, htext) = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or_else(|| text_err(1, "empty input, expected a header"))?;
    let header = parse_header(htext, hline)?;
    let dims = header.dims();
    let expected = dims
        .iter()
        .try_fold(1usize, |acc, &n| acc.checked_mul(n))
        .ok_or_else(|| text_err(hline, "dimensions overflow"))?;

    let mut values = Vec::with_capacity(expected.min(1 << 24));
    let mut last_line = hline;
    for (lineno, text) in lines {
        last_line = lineno;
        for tok in text.split_whitespace() {
            let x: f64 = tok.parse().map_err(|_| text_err(lineno, format!("not a number: {tok:?}")))?;
            if !x.is_finite() {
                return Err(text_err(lineno, format!("non-finite value {tok:?}")));
            }
            if values.len() == expected {
                return Err(text_err(lineno, format!("more than the {expected} values the header declares")));
            }
            values.push(x);
        }
    }
    if values.len() != expected {
        return Err(text_err(last_line, format!("expected {expected} values, found {}", values.len())));
    }
    let tensor = DenseTensor::new(dims, values).map_err(|e| text_err(hline, e.to_string()))?;
    Ok(TensorFile { header, tensor })
}

pub fn parse_tensor_text(src: &str) -> Result<DenseTensor, FormatError> {
    parse_text(src).map(|f| f.tensor)
}

pub fn write_tensor_text(x: &DenseTensor) -> String {
    TensorFile::new(x.clone()).to_text()
}

pub fn write_tensor_binary(x: &DenseTensor) -> Vec<u8> {
    let dims = x.dims();
    let mut out = Vec::with_capacity(8 + 8 * dims.len() + 8 * x.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(dims.len() as u32).to_le_bytes());
    for &n in dims {
        out.extend_from_slice(&(n as u64).to_le_bytes());
    }
    for &v in x.as_slice() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

fn take<'a>(bytes: &mut &'a [u8], n: usize, what: &str) -> Result<&'a [u8], FormatError> {
    if bytes.len() < n {
        return Err(FormatError::Binary(format!("truncated while reading {what}")));
    }
    let (head, tail) = bytes.split_at(n);
    *bytes = tail;
    Ok(head)
}

pub fn parse_tensor_binary(mut bytes: &[u8]) -> Result<DenseTensor, FormatError> {
    if take(&mut bytes, 4, "magic")? != MAGIC {
        return Err(FormatError::Binary("bad magic, expected TEN1".into()));
    }
    let d = u32::from_le_bytes(take(&mut bytes, 4, "order")?.try_into().expect("4 bytes"));
    if d == 0 {
        return Err(FormatError::Binary("order must be at least 1".into()));
    }
    if (bytes.len() as u64) < 8 * u64::from(d) {
        return Err(FormatError::Binary("truncated while reading dimensions".into()));
    }
    let mut dims = Vec::with_capacity(d as usize);
    for _ in 0..d {
        let n = u64::from_le_bytes(take(&mut bytes, 8, "dimensions")?.try_into().expect("8 bytes"));
        let n = usize::try_from(n).map_err(|_| FormatError::Binary("dimension overflows usize".into()))?;
        if n == 0 {
            return Err(FormatError::Binary("zero dimension".into()));
        }
        dims.push(n);
    }
    let count = dims
        .iter()
        .try_fold(1usize, |acc, &n| acc.checked_mul(n))
        .filter(|c| c.checked_mul(8).is_some())
        .ok_or_else(|| FormatError::Binary("dimensions overflow".into()))?;
    let payload = take(&mut bytes, count * 8, "values")?;
    if !bytes.is_empty() {
        return Err(FormatError::Binary(format!("{} trailing bytes after payload", bytes.len())));
    }
    let values = payload.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect();
    DenseTensor::new(dims, values).map_err(|e| FormatError::Binary(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    Text,
    Binary,
}

impl Encoding {
    /// `.bin` and `.ten` files are binary, everything else text.
    pub fn for_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("bin") | Some("ten") => Encoding::Binary,
            _ => Encoding::Text,
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Encoding::Text => "txt",
            Encoding::Binary => "bin",
        }
    }
}

/// Sniffs the magic to pick the decoder. Input that cannot be text (NUL
/// bytes or invalid UTF-8) without the magic is a binary format error.
pub fn decode(bytes: &[u8]) -> Result<DenseTensor, FormatError> {
    if bytes.starts_with(MAGIC) {
        return parse_tensor_binary(bytes);
    }
    match std::str::from_utf8(bytes) {
        Ok(text) if !text.contains('\0') => parse_tensor_text(text),
        _ => parse_tensor_binary(bytes),
    }
}

pub fn encode(x: &DenseTensor, enc: Encoding) -> Vec<u8> {
    match enc {
        Encoding::Text => write_tensor_text(x).into_bytes(),
        Encoding::Binary => write_tensor_binary(x),
    }
}
