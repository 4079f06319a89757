mod common;

use common::*;
use kronlab_core::svd::MAX_SWEEPS;
use kronlab_core::*;
use rand::Rng;

fn assert_svd_invariants(a: &DenseMatrix, svd: &SvdResult) {
    let r = a.rows().min(a.cols());
    assert_eq!(svd.u.shape(), (a.rows(), r));
    assert_eq!(svd.v.shape(), (a.cols(), r));
    assert!(svd.sigma.windows(2).all(|w| w[0] >= w[1]));
    assert!(svd.sigma.iter().all(|&s| s >= 0.0));
    for x in [&svd.u, &svd.v] {
        let g = x.transpose().matmul(x).unwrap();
        for i in 0..r {
            for j in 0..r {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g[(i, j)] - want).abs() <= 1e-12, "orthogonality {} at ({i},{j})", g[(i, j)]);
            }
        }
    }
    let bound = 1e-12 * svd.sigma[0] * ((a.rows() * a.cols()) as f64).sqrt();
    let rec = svd.reconstruct();
    for (x, y) in rec.as_slice().iter().zip(a.as_slice()) {
        assert!((x - y).abs() <= bound, "reconstruction off by {}", (x - y).abs());
    }
}

/// The mixed suite: generic, rank-deficient, repeated-σ and badly scaled.
fn suite_matrix(g: &mut impl Rng, case: usize) -> DenseMatrix {
    let rows = g.gen_range(1..=12);
    let cols = g.gen_range(1..=12);
    let r = rows.min(cols);
    match case % 5 {
        0 => rand_matrix(g, rows, cols),
        1 => {
            let k = g.gen_range(1..=r);
            rand_low_rank(g, rows, cols, k)
        }
        2 => {
            let s: Vec<f64> = (0..r).map(|k| if k < r / 2 + 1 { 3.0 } else { 1.0 }).collect();
            with_singular_values(g, rows, cols, &s)
        }
        3 => with_singular_values(g, rows, cols, &vec![1.0; r]),
        _ => rand_matrix(g, rows, cols).scale(1e-6 + 1e6 * g.gen::<f64>()),
    }
}

#[test]
fn randomized_suite_invariants() {
    let mut g = rng(2024);
    for case in 0..200 {
        let a = suite_matrix(&mut g, case);
        let svd = jacobi_svd(&a).unwrap();
        assert_svd_invariants(&a, &svd);
    }
}

#[test]
fn small_cases_match_characteristic_polynomial() {
    let mut g = rng(7);
    for case in 0..400 {
        let n = 2 + case % 2;
        let a = match case % 7 {
            0 => rand_low_rank(&mut g, n, n, 1),
            1 => rand_low_rank(&mut g, n, n, n - 1),
            _ => rand_matrix(&mut g, n, n),
        };
        let sigma = jacobi_svd(&a).unwrap().sigma;
        let s1 = sigma[0];
        let lam: Vec<f64> = sigma.iter().map(|s| s * s).collect();

        // elementary symmetric functions of σ² against the polynomial coefficients
        let coeffs = gram_char_poly(&a);
        let elem = elementary_symmetric(&lam);
        for (k, (e, c)) in elem.iter().zip(&coeffs).enumerate() {
            let scale = s1.powi(2 * (k as i32 + 1));
            assert!((e - c).abs() <= 1e-10 * scale, "e{} = {e}, coefficient {c}", k + 1);
        }

        // roots themselves where they are well conditioned (a double root of
        // the cubic is only resolved to ~√ε)
        let eig = gram_eigen_oracle(&a);
        let separated = eig.windows(2).all(|w| w[0] - w[1] > 1e-3 * s1 * s1);
        if !separated {
            continue;
        }
        for (s, &l) in sigma.iter().zip(&eig) {
            assert!((s * s - l).abs() <= 1e-10 * s1 * s1, "σ² = {}, λ = {l}", s * s);
            if l > 1e-6 * s1 * s1 {
                assert!((s - l.sqrt()).abs() <= 1e-10 * s, "σ = {s}, √λ = {}", l.sqrt());
            }
        }
    }
}

#[test]
fn sigma_permutation_and_scaling() {
    let mut g = rng(99);
    for _ in 0..50 {
        let (r, c) = (g.gen_range(1..=9), g.gen_range(1..=9));
        let a = rand_matrix(&mut g, r, c);
        let s = jacobi_svd(&a).unwrap().sigma;
        let pa = rand_permutation(&mut g, r).matmul(&a).unwrap().matmul(&rand_permutation(&mut g, c)).unwrap();
        let sp = jacobi_svd(&pa).unwrap().sigma;
        assert!(rel_vec_diff(&sp, &s) <= 1e-12);
        let alpha = -3.7;
        let ss = jacobi_svd(&a.scale(alpha)).unwrap().sigma;
        let want: Vec<f64> = s.iter().map(|x| x * alpha.abs()).collect();
        assert!(rel_vec_diff(&ss, &want) <= 1e-13);
    }
}

#[test]
fn eckart_young_consistency() {
    let mut g = rng(5);
    for _ in 0..30 {
        let (r, c) = (g.gen_range(2..=8), g.gen_range(2..=8));
        let a = rand_matrix(&mut g, r, c);
        let full = jacobi_svd(&a).unwrap();
        let f2 = a.fro_norm().powi(2);
        for k in 1..=r.min(c) {
            let (t, residual) = truncated_svd(&a, k).unwrap();
            let diff = a.sub(&t.reconstruct()).unwrap().fro_norm();
            assert!(
                (diff - residual).abs() <= 1e-10 * residual + 1e-12 * full.sigma[0],
                "k={k} diff={diff:e} residual={residual:e}"
            );
            let head: f64 = full.sigma[..k].iter().map(|s| s * s).sum();
            assert!((diff * diff + head - f2).abs() <= 1e-10 * f2);
        }
    }
}

#[test]
fn truncated_random_5x4() {
    let mut g = rng(54);
    let a = rand_matrix(&mut g, 5, 4);
    let full = jacobi_svd(&a).unwrap().sigma;
    let (_, residual) = truncated_svd(&a, 2).unwrap();
    let want = (full[2] * full[2] + full[3] * full[3]).sqrt();
    assert!((residual - want).abs() <= 1e-14 * want);
    let (_, zero) = truncated_svd(&a, 4).unwrap();
    assert!(zero <= 1e-12 * full[0]);
}

#[test]
fn dominant_triplet_agrees_with_jacobi() {
    let mut g = rng(65);
    for _ in 0..20 {
        let a = rand_matrix(&mut g, 6, 5);
        let svd = jacobi_svd(&a).unwrap();
        if svd.sigma[0] <= 1.01 * svd.sigma[1] {
            continue;
        }
        let t = dominant_triplet(&a, 1e-14, 10_000).unwrap();
        assert!((t.sigma - svd.sigma[0]).abs() <= 1e-8 * svd.sigma[0]);
        let cos: f64 = t.u.iter().zip(svd.u.col(0)).map(|(x, y)| x * y).sum();
        assert!(cos.abs() >= 1.0 - 1e-6);
        // shared sign convention
        assert!(cos > 0.0);
    }
}

#[test]
fn deterministic_runs() {
    let mut g = rng(1);
    let a = rand_matrix(&mut g, 7, 5);
    let s1 = jacobi_svd(&a).unwrap();
    let s2 = jacobi_svd(&a).unwrap();
    assert_eq!(s1, s2);
    const { assert!(MAX_SWEEPS == 60) };
}

#[test]
fn cond2_of_prescribed_spectrum() {
    let mut g = rng(12);
    let a = with_singular_values(&mut g, 4, 3, &[8.0, 2.0, 0.5]);
    match cond2(&a).unwrap() {
        Condition::Finite(k) => assert!((k - 16.0).abs() <= 1e-10 * 16.0),
        Condition::Singular => panic!("well-conditioned matrix reported singular"),
    }
    let padded =
        DenseMatrix::from_fn(3, 3, |i, j| if i < 2 && j < 2 { [1.0, 2.0][i] * [3.0, -1.0][j] } else { 0.0 }).unwrap();
    assert_eq!(cond2(&padded).unwrap(), Condition::Singular);
}
