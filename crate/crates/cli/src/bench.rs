//! Structured versus materialised Kronecker matvec timing.

use std::hint::black_box;
use std::time::{Duration, Instant};

use kronlab_core::{kron, kron_matvec, DenseMatrix, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct MatvecBench {
    pub reps: usize,
    /// Materialise `B ⊗ C`, then multiply.
    pub explicit_median: Duration,
    /// `vec(C X Bᵀ)`.
    pub structured_median: Duration,
    /// Largest entrywise gap between the two results, relative to the
    /// largest entry of the explicit one.
    pub max_rel_diff: f64,
}

impl MatvecBench {
    pub fn speedup(&self) -> f64 {
        self.explicit_median.as_secs_f64() / self.structured_median.as_secs_f64().max(1e-12)
    }
}

fn median(mut xs: Vec<Duration>) -> Duration {
    xs.sort_unstable();
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2
    }
}

fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> Result<DenseMatrix> {
    DenseMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..1.0))
}

/// Times both routes on random `B` (`m × n`), `C` (`p × q`) and `x`.
pub fn bench_matvec(m: usize, n: usize, p: usize, q: usize, reps: usize, seed: u64) -> Result<MatvecBench> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = random_matrix(&mut rng, m, n)?;
    let c = random_matrix(&mut rng, p, q)?;
    let x: Vec<f64> = (0..n * q).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let reps = reps.max(1);

    let mut explicit = Vec::with_capacity(reps);
    let mut structured = Vec::with_capacity(reps);
    let mut y_explicit = Vec::new();
    let mut y_structured = Vec::new();
    for _ in 0..reps {
        let t = Instant::now();
        let k = kron(black_box(&b), black_box(&c))?;
        y_explicit = black_box(k.matvec(&x)?);
        drop(k);
        explicit.push(t.elapsed());

        let t = Instant::now();
        y_structured = black_box(kron_matvec(black_box(&b), black_box(&c), &x)?);
        structured.push(t.elapsed());
    }

    let scale = y_explicit.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(f64::MIN_POSITIVE);
    let max_rel_diff = y_explicit.iter().zip(&y_structured).fold(0.0f64, |a, (u, v)| a.max((u - v).abs())) / scale;
    Ok(MatvecBench { reps, explicit_median: median(explicit), structured_median: median(structured), max_rel_diff })
}
