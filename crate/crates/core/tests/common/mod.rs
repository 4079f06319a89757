#![allow(dead_code)]

use kronlab_core::{DenseMatrix, DenseTensor};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_vec(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

pub fn rand_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::new(rows, cols, rand_vec(rng, rows * cols)).unwrap()
}

pub fn rand_tensor(rng: &mut impl Rng, dims: &[usize]) -> DenseTensor {
    let n = dims.iter().product();
    DenseTensor::new(dims.to_vec(), rand_vec(rng, n)).unwrap()
}

/// Modified Gram–Schmidt on a random square matrix.
pub fn rand_orthogonal(rng: &mut impl Rng, n: usize) -> DenseMatrix {
    let mut cols: Vec<Vec<f64>> = Vec::new();
    while cols.len() < n {
        let mut v = rand_vec(rng, n);
        for _ in 0..2 {
            for c in &cols {
                let p: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(c).for_each(|(a, b)| *a -= p * b);
            }
        }
        let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nrm > 1e-3 {
            cols.push(v.into_iter().map(|x| x / nrm).collect());
        }
    }
    DenseMatrix::new(n, n, cols.concat()).unwrap()
}

pub fn rand_permutation(rng: &mut impl Rng, n: usize) -> DenseMatrix {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    DenseMatrix::from_fn(n, n, |i, j| if perm[i] == j { 1.0 } else { 0.0 }).unwrap()
}

/// Explicit Kronecker product straight from the index formula
/// `(B ⊗ C)[i·p + s, j·q + t] = B[i, j] · C[s, t]`.
pub fn kron_oracle(b: &DenseMatrix, c: &DenseMatrix) -> DenseMatrix {
    let (p, q) = c.shape();
    DenseMatrix::from_fn(b.rows() * p, b.cols() * q, |r, k| b[(r / p, k / q)] * c[(r % p, k % q)]).unwrap()
}

pub fn rel_diff(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    let d = a.sub(b).unwrap().fro_norm();
    let s = b.fro_norm();
    if s == 0.0 {
        d
    } else {
        d / s
    }
}

pub fn rel_vec_diff(a: &[f64], b: &[f64]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    let s: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    if s == 0.0 {
        d
    } else {
        d / s
    }
}

/// Eigenvalues of the Gram matrix `AᵀA` (or `AAᵀ`, whichever is at most
/// 3×3) from its characteristic polynomial, descending.
pub fn gram_eigen_oracle(a: &DenseMatrix) -> Vec<f64> {
    let at = a.transpose();
    let g = if a.cols() <= a.rows() { at.matmul(a).unwrap() } else { a.matmul(&at).unwrap() };
    let n = g.rows();
    let mut ev = match n {
        1 => vec![g[(0, 0)]],
        2 => {
            let tr = g[(0, 0)] + g[(1, 1)];
            let det = g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)];
            let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
            let big = tr / 2.0 + disc;
            // Vieta for the small root avoids cancellation
            vec![big, if big > 0.0 { det / big } else { 0.0 }]
        }
        3 => cubic_symmetric(&g),
        _ => panic!("oracle handles at most 3x3 Gram matrices"),
    };
    ev.sort_by(|x, y| y.total_cmp(x));
    ev
}

/// Trigonometric solution of the characteristic cubic of a symmetric 3×3.
fn cubic_symmetric(g: &DenseMatrix) -> Vec<f64> {
    let p1 = g[(0, 1)].powi(2) + g[(0, 2)].powi(2) + g[(1, 2)].powi(2);
    if p1 == 0.0 {
        return vec![g[(0, 0)], g[(1, 1)], g[(2, 2)]];
    }
    let q = (g[(0, 0)] + g[(1, 1)] + g[(2, 2)]) / 3.0;
    let p2 = (g[(0, 0)] - q).powi(2) + (g[(1, 1)] - q).powi(2) + (g[(2, 2)] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let b = |i: usize, j: usize| (g[(i, j)] - if i == j { q } else { 0.0 }) / p;
    let det = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) - b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0))
        + b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
    let r = (det / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    vec![e1, 3.0 * q - e1 - e3, e3]
}

/// Matrix with prescribed singular values: `Q₁ diag(s) Q₂ᵀ`.
pub fn with_singular_values(rng: &mut impl Rng, rows: usize, cols: usize, s: &[f64]) -> DenseMatrix {
    let q1 = rand_orthogonal(rng, rows);
    let q2 = rand_orthogonal(rng, cols);
    let d = DenseMatrix::from_fn(rows, cols, |i, j| if i == j && i < s.len() { s[i] } else { 0.0 }).unwrap();
    q1.matmul(&d).unwrap().matmul(&q2.transpose()).unwrap()
}

/// Random low-rank matrix `L R` with inner dimension `k`.
pub fn rand_low_rank(rng: &mut impl Rng, rows: usize, cols: usize, k: usize) -> DenseMatrix {
    rand_matrix(rng, rows, k).matmul(&rand_matrix(rng, k, cols)).unwrap()
}

/// Coefficients `(c_1, …, c_n)` of `det(λI − G) = λⁿ − c_1 λⁿ⁻¹ + c_2 λⁿ⁻² − …`
/// for the Gram matrix of a square 2×2 or 3×3 `a`: trace, sum of principal
/// 2×2 minors, determinant.
pub fn gram_char_poly(a: &DenseMatrix) -> Vec<f64> {
    let g = a.transpose().matmul(a).unwrap();
    let n = g.rows();
    let minor = |i: usize, j: usize| g[(i, i)] * g[(j, j)] - g[(i, j)] * g[(j, i)];
    match n {
        2 => vec![g[(0, 0)] + g[(1, 1)], minor(0, 1)],
        3 => {
            let det = g[(0, 0)] * minor(1, 2) - g[(0, 1)] * (g[(1, 0)] * g[(2, 2)] - g[(1, 2)] * g[(2, 0)])
                + g[(0, 2)] * (g[(1, 0)] * g[(2, 1)] - g[(1, 1)] * g[(2, 0)]);
            vec![g[(0, 0)] + g[(1, 1)] + g[(2, 2)], minor(0, 1) + minor(0, 2) + minor(1, 2), det]
        }
        _ => panic!("only 2x2 and 3x3"),
    }
}

pub fn elementary_symmetric(x: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; x.len()];
    for (count, &v) in x.iter().enumerate() {
        for k in (1..=count + 1).rev() {
            let prev = if k == 1 { 1.0 } else { e[k - 2] };
            e[k - 1] += v * prev;
        }
    }
    e
}
