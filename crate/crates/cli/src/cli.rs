//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or shape error, 2 parse/format/io error,
//! 3 numeric error. Errors go to stderr as one line starting with
//! `error: <category>:`.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use kronlab_core::{
    self as core, cond2, hosvd, jacobi_svd, kron, kron_spectrum, kron_sum_approx, mode_spectra, mode_unfold,
    multilinear_rank, nearest_kron, numeric_rank, rearrange, truncated_svd, BlockShape, Condition, DenseMatrix,
    DenseTensor, ErrorKind, KronTermList, RankTolerance,
};

use crate::bench::bench_matvec;
use crate::format::{decode, encode, format_value, Encoding, FormatError};
use crate::report::{InputDigest, RunReport};

/// Relative output paths are resolved against this directory when set.
pub const OUT_DIR_ENV: &str = "KRONLAB_OUT_DIR";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("shape: {0}")]
    Shape(String),
    #[error("{}: {}: {source}", if matches!(source, FormatError::Text { .. }) { "parse" } else { "format" }, path.display())]
    Decode { path: PathBuf, source: FormatError },
    #[error("io: {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("numeric: {0}")]
    Numeric(core::Error),
}

impl CliError {
    pub fn category(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Shape(_) => "shape",
            CliError::Decode { source: FormatError::Text { .. }, .. } => "parse",
            CliError::Decode { .. } => "format",
            CliError::Io { .. } => "io",
            CliError::Numeric(_) => "numeric",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Shape(_) => 1,
            CliError::Decode { .. } | CliError::Io { .. } => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<core::Error> for CliError {
    fn from(e: core::Error) -> Self {
        match e.kind() {
            ErrorKind::Shape => CliError::Shape(e.to_string()),
            ErrorKind::Input | ErrorKind::Numeric => CliError::Numeric(e),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pair(pub usize, pub usize);

fn parse_pair(s: &str) -> Result<Pair, String> {
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected AxB, got {s:?}"))?;
    let num = |t: &str| match t.trim().parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("{t:?} is not a positive integer")),
    };
    Ok(Pair(num(a)?, num(b)?))
}

fn parse_tol(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t.is_finite() && t >= 0.0 => Ok(t),
        _ => Err(format!("{s:?} is not a finite non-negative number")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Text,
    Binary,
}

#[derive(Debug, Parser)]
#[command(name = "kronlab", version, about = "Kronecker-structured dense linear algebra")]
pub struct Cli {
    /// Worker threads. The numeric core is deterministic and single-threaded,
    /// so every value yields identical output.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: u32,

    /// Encoding of files written under an output prefix. Single `-o` files
    /// are binary when they end in `.bin` or `.ten`.
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Text)]
    pub format: OutFormat,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write B ⊗ C.
    Kron {
        b: PathBuf,
        c: PathBuf,
        #[arg(short = 'o')]
        out: PathBuf,
    },
    /// Nearest Kronecker product (or R-term Kronecker sum) of A.
    Nkp {
        a: PathBuf,
        /// Block grid, MxN.
        #[arg(long, value_parser = parse_pair)]
        grid: Pair,
        /// Block size, PxQ.
        #[arg(long, value_parser = parse_pair)]
        block: Pair,
        #[arg(long, default_value_t = 1)]
        rank: usize,
        /// Output prefix; writes PREFIX_B<k> and PREFIX_C<k>.
        #[arg(short = 'o')]
        out: PathBuf,
    },
    /// Write the block rearrangement T(A) (row i + j*M holds vec of block (i, j)).
    Rearrange {
        a: PathBuf,
        #[arg(long, value_parser = parse_pair)]
        grid: Pair,
        #[arg(long, value_parser = parse_pair)]
        block: Pair,
        #[arg(short = 'o')]
        out: PathBuf,
    },
    /// Numerical Kronecker rank of A.
    KronRank {
        a: PathBuf,
        #[arg(long, value_parser = parse_pair)]
        grid: Pair,
        #[arg(long, value_parser = parse_pair)]
        block: Pair,
        #[arg(long, value_parser = parse_tol, default_value_t = RankTolerance::DEFAULT)]
        tol: f64,
    },
    /// Singular values, rank and condition number of A.
    Svd {
        a: PathBuf,
        /// Report the rank-R truncation residual.
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, value_parser = parse_tol, default_value_t = RankTolerance::DEFAULT)]
        tol: f64,
        /// Output prefix; writes PREFIX_U, PREFIX_S, PREFIX_V.
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Mode-K unfolding of X (0-based mode).
    Unfold {
        x: PathBuf,
        #[arg(long)]
        mode: usize,
        #[arg(short = 'o')]
        out: PathBuf,
    },
    /// Multilinear rank of X.
    Mlrank {
        x: PathBuf,
        #[arg(long, value_parser = parse_tol, default_value_t = RankTolerance::DEFAULT)]
        tol: f64,
    },
    /// Truncated HOSVD of X.
    Hosvd {
        x: PathBuf,
        /// Target ranks R1,...,Rd.
        #[arg(long, value_delimiter = ',', required = true)]
        target: Vec<usize>,
        /// Output prefix; writes PREFIX_core and PREFIX_U<k>.
        #[arg(short = 'o')]
        out: PathBuf,
    },
    /// Time materialised vs structured Kronecker matvec.
    BenchMatvec {
        #[arg(long = "m")]
        m: usize,
        #[arg(long = "n")]
        n: usize,
        #[arg(long = "p")]
        p: usize,
        #[arg(long = "q")]
        q: usize,
        #[arg(long, default_value_t = 20)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Result of [`run_command`]; `stdout` holds help text or the rendered report.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub report: Option<RunReport>,
    pub stdout: String,
    pub error: Option<CliError>,
}

impl Outcome {
    pub fn stderr(&self) -> String {
        self.error.as_ref().map(|e| format!("error: {e}\n")).unwrap_or_default()
    }
}

pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let echo: Vec<String> = argv.iter().skip(1).map(|s| s.to_string_lossy().into_owned()).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind as K;
            if matches!(e.kind(), K::DisplayHelp | K::DisplayVersion) {
                return Outcome { code: 0, report: None, stdout: e.to_string(), error: None };
            }
            let msg = e.kind().as_str().unwrap_or("invalid arguments").to_string();
            let detail = e.to_string();
            let first = detail.lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            let err = CliError::Usage(if first.is_empty() { msg } else { first });
            return Outcome { code: 1, report: None, stdout: String::new(), error: Some(err) };
        }
    };
    let mut report = RunReport::new(echo);
    let start = Instant::now();
    match execute(&cli, &mut report) {
        Ok(()) => {
            report.timing("total", start.elapsed());
            Outcome { code: 0, stdout: report.to_string(), report: Some(report), error: None }
        }
        Err(e) => Outcome { code: e.exit_code(), report: None, stdout: String::new(), error: Some(e) },
    }
}

fn out_path(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn read_tensor(path: &Path) -> Result<DenseTensor, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    decode(&bytes).map_err(|source| CliError::Decode { path: path.to_path_buf(), source })
}

fn read_matrix(path: &Path) -> Result<DenseMatrix, CliError> {
    let x = read_tensor(path)?;
    match x.order() {
        1 => {
            let n = x.len();
            Ok(x.reshape(vec![n, 1])?.into_matrix()?)
        }
        2 => Ok(x.into_matrix()?),
        d => Err(CliError::Shape(format!("{}: expected a matrix, got an order-{d} tensor", path.display()))),
    }
}

fn write_tensor(path: &Path, x: &DenseTensor, enc: Encoding) -> Result<PathBuf, CliError> {
    let path = out_path(path);
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|source| CliError::Io { path: parent.to_path_buf(), source })?;
    }
    std::fs::write(&path, encode(x, enc)).map_err(|source| CliError::Io { path: path.clone(), source })?;
    Ok(path)
}

fn write_single(path: &Path, x: &DenseTensor) -> Result<PathBuf, CliError> {
    write_tensor(path, x, Encoding::for_path(path))
}

fn prefixed(prefix: &Path, suffix: &str, fmt: OutFormat) -> (PathBuf, Encoding) {
    let enc = match fmt {
        OutFormat::Text => Encoding::Text,
        OutFormat::Binary => Encoding::Binary,
    };
    let mut name = prefix.as_os_str().to_owned();
    name.push(format!("_{suffix}.{}", enc.extension()));
    (PathBuf::from(name), enc)
}

fn block_shape(a: &DenseMatrix, grid: Pair, block: Pair) -> Result<BlockShape, CliError> {
    let shape = BlockShape::new(grid.0, grid.1, block.0, block.1)?;
    if !shape.is_consistent_with(a) {
        return Err(CliError::Shape(format!(
            "a {}x{} grid of {}x{} blocks needs a {}x{} matrix, input is {}x{}",
            grid.0,
            grid.1,
            block.0,
            block.1,
            grid.0 * block.0,
            grid.1 * block.1,
            a.rows(),
            a.cols()
        )));
    }
    Ok(shape)
}

fn tolerance(t: f64) -> Result<RankTolerance, CliError> {
    RankTolerance::new(t).map_err(|e| CliError::Usage(e.to_string()))
}

fn dims_string(d: &[usize]) -> String {
    d.iter().map(|n| n.to_string()).collect::<Vec<_>>().join("x")
}

fn execute(cli: &Cli, report: &mut RunReport) -> Result<(), CliError> {
    match &cli.command {
        Command::Kron { b, c, out } => {
            let (bm, cm) = (read_matrix(b)?, read_matrix(c)?);
            report.input(InputDigest::of("B", &bm.clone().into()));
            report.input(InputDigest::of("C", &cm.clone().into()));
            let t = Instant::now();
            let k = kron(&bm, &cm)?;
            report.timing("kron", t.elapsed());
            let path = write_single(out, &k.clone().into())?;
            report.output("output", path.display());
            report.output("dims", dims_string(&[k.rows(), k.cols()]));
            report.output("fro_norm", format_value(k.fro_norm()));
        }
        Command::Nkp { a, grid, block, rank, out } => {
            let am = read_matrix(a)?;
            report.input(InputDigest::of("A", &am.clone().into()));
            let shape = block_shape(&am, *grid, *block)?;
            let t = Instant::now();
            let list = if *rank == 1 {
                let nk = nearest_kron(&am, shape)?;
                KronTermList::new(shape, vec![(nk.b, nk.c)], vec![nk.sigma])?
            } else {
                kron_sum_approx(&am, shape, *rank)?.0
            };
            report.timing("approximate", t.elapsed());

            let mut reread = Vec::with_capacity(list.len());
            for (k, (b, c)) in list.terms().iter().enumerate() {
                let (pb, enc) = prefixed(out, &format!("B{k}"), cli.format);
                let (pc, _) = prefixed(out, &format!("C{k}"), cli.format);
                let pb = write_tensor(&pb, &b.clone().into(), enc)?;
                let pc = write_tensor(&pc, &c.clone().into(), enc)?;
                report.output("wrote", format!("{} {}", pb.display(), pc.display()));
                reread.push((read_matrix(&pb)?, read_matrix(&pc)?));
            }
            // audit: residual of what was actually written
            let audited = KronTermList::new(shape, reread, list.sigmas().to_vec())?;
            let residual = am.sub(&audited.materialize()?)?.fro_norm();
            let fro = am.fro_norm();
            report.output("terms", list.len());
            report.sigmas("sigma", list.sigmas());
            report.output("fro_norm", format_value(fro));
            report.output("residual", format_value(residual));
            report.output("relative_residual", format_value(residual / fro));
        }
        Command::Rearrange { a, grid, block, out } => {
            let am = read_matrix(a)?;
            report.input(InputDigest::of("A", &am.clone().into()));
            let shape = block_shape(&am, *grid, *block)?;
            let t = rearrange(&am, shape)?;
            let path = write_single(out, &t.clone().into())?;
            report.output("output", path.display());
            report.output("dims", dims_string(&[t.rows(), t.cols()]));
        }
        Command::KronRank { a, grid, block, tol } => {
            let am = read_matrix(a)?;
            report.input(InputDigest::of("A", &am.clone().into()));
            let shape = block_shape(&am, *grid, *block)?;
            let tol = tolerance(*tol)?;
            let t = Instant::now();
            let sigma = kron_spectrum(&am, shape)?;
            report.timing("svd", t.elapsed());
            report.output("kron_rank", numeric_rank(&sigma, tol)?);
            report.sigmas("sigma", &sigma);
            report.output("tol", format_value(tol.value()));
        }
        Command::Svd { a, rank, tol, out } => {
            let am = read_matrix(a)?;
            report.input(InputDigest::of("A", &am.clone().into()));
            let tol = tolerance(*tol)?;
            let t = Instant::now();
            let svd = jacobi_svd(&am)?;
            report.timing("svd", t.elapsed());
            report.sigmas("sigma", &svd.sigma);
            report.output("rank", numeric_rank(&svd.sigma, tol)?);
            match cond2(&am)? {
                Condition::Finite(k) => report.output("cond2", format_value(k)),
                Condition::Singular => report.output("cond2", "singular"),
            }
            if let Some(r) = rank {
                let (tsvd, _) = truncated_svd(&am, *r)?;
                let residual = am.sub(&tsvd.reconstruct())?.fro_norm();
                report.output("truncation_rank", r);
                report.output("residual", format_value(residual));
            }
            if let Some(prefix) = out {
                let s = DenseTensor::new(vec![svd.sigma.len()], svd.sigma.clone())?;
                for (suffix, x) in [("U", svd.u.clone().into()), ("S", s), ("V", svd.v.clone().into())] {
                    let (p, enc) = prefixed(prefix, suffix, cli.format);
                    let p = write_tensor(&p, &x, enc)?;
                    report.output("wrote", p.display());
                }
            }
        }
        Command::Unfold { x, mode, out } => {
            let xt = read_tensor(x)?;
            report.input(InputDigest::of("X", &xt));
            let u = mode_unfold(&xt, *mode)?;
            let m = u.into_matrix();
            let path = write_single(out, &m.clone().into())?;
            report.output("output", path.display());
            report.output("dims", dims_string(&[m.rows(), m.cols()]));
        }
        Command::Mlrank { x, tol } => {
            let xt = read_tensor(x)?;
            report.input(InputDigest::of("X", &xt));
            let tol = tolerance(*tol)?;
            let t = Instant::now();
            let ranks = multilinear_rank(&xt, tol)?;
            report.timing("svd", t.elapsed());
            let s: Vec<String> = ranks.iter().map(|r| r.to_string()).collect();
            report.output("mlrank", s.join(","));
            for (k, sig) in mode_spectra(&xt)?.iter().enumerate() {
                report.sigmas(&format!("sigma_mode{k}"), sig);
            }
        }
        Command::Hosvd { x, target, out } => {
            let xt = read_tensor(x)?;
            report.input(InputDigest::of("X", &xt));
            if target.len() != xt.order() {
                return Err(CliError::Usage(format!(
                    "--target has {} entries, tensor has order {}",
                    target.len(),
                    xt.order()
                )));
            }
            let t = Instant::now();
            let h = hosvd(&xt, target)?;
            report.timing("hosvd", t.elapsed());

            let (pcore, enc) = prefixed(out, "core", cli.format);
            let pcore = write_tensor(&pcore, &h.core, enc)?;
            report.output("wrote", pcore.display());
            let mut factors = Vec::with_capacity(h.factors.len());
            for (k, u) in h.factors.iter().enumerate() {
                let (p, enc) = prefixed(out, &format!("U{k}"), cli.format);
                let p = write_tensor(&p, &u.clone().into(), enc)?;
                report.output("wrote", p.display());
                factors.push(read_matrix(&p)?);
            }
            // audit: reconstruct from the files just written
            let core_back = read_tensor(&pcore)?;
            let recon = factors.iter().enumerate().try_fold(core_back, |acc, (k, u)| core::mode_mult(&acc, u, k))?;
            let diff: Vec<f64> = xt.as_slice().iter().zip(recon.as_slice()).map(|(a, b)| a - b).collect();
            let error = core::fro_norm(&diff);
            let tails = h.mode_tails();
            report.output("core_dims", dims_string(h.core.dims()));
            report.output("fro_norm", format_value(xt.fro_norm()));
            report.output("error", format_value(error));
            report.output("tail_max", format_value(tails.iter().cloned().fold(0.0, f64::max)));
            report.output("tail_rss", format_value(core::fro_norm(&tails)));
        }
        Command::BenchMatvec { m, n, p, q, reps, seed } => {
            for (name, v) in [("m", m), ("n", n), ("p", p), ("q", q), ("reps", reps)] {
                if *v == 0 {
                    return Err(CliError::Usage(format!("--{name} must be positive")));
                }
            }
            let r = bench_matvec(*m, *n, *p, *q, *reps, *seed)?;
            report.output("reps", r.reps);
            report.output("explicit_median_s", format!("{:.6e}", r.explicit_median.as_secs_f64()));
            report.output("structured_median_s", format!("{:.6e}", r.structured_median.as_secs_f64()));
            report.output("speedup", format!("{:.2}", r.speedup()));
            report.output("max_rel_diff", format!("{:.3e}", r.max_rel_diff));
        }
    }
    Ok(())
}
