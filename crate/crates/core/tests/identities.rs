//! Algebraic identities for the dense core, Kronecker products, block stacking
//! and the rearrangement, checked against index-formula oracles.

mod common;

use common::*;
use kronlab_core::*;
use proptest::prelude::*;

fn dims() -> impl Strategy<Value = usize> {
    1usize..=4
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = DenseMatrix> {
    proptest::collection::vec(-10.0f64..10.0, rows * cols).prop_map(move |d| DenseMatrix::new(rows, cols, d).unwrap())
}

fn any_matrix() -> impl Strategy<Value = DenseMatrix> {
    (dims(), dims()).prop_flat_map(|(r, c)| matrix(r, c))
}

/// Every BlockShape with `mp, nq <= 6`.
fn all_shapes() -> Vec<BlockShape> {
    let mut out = Vec::new();
    for m in 1..=6 {
        for p in 1..=6 / m {
            for n in 1..=6 {
                for q in 1..=6 / n {
                    out.push(BlockShape::new(m, n, p, q).unwrap());
                }
            }
        }
    }
    out
}

fn sorted_bits(v: &[f64]) -> Vec<u64> {
    let mut b: Vec<u64> = v.iter().map(|x| x.to_bits()).collect();
    b.sort_unstable();
    b
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vec_is_linear((a, b) in (dims(), dims()).prop_flat_map(|(r, c)| (matrix(r, c), matrix(r, c))),
                     alpha in -3.0f64..3.0, beta in -3.0f64..3.0) {
        let lhs = a.scale(alpha).add(&b.scale(beta)).unwrap();
        let rhs: Vec<f64> = vec(&a).iter().zip(vec(&b)).map(|(x, y)| alpha * x + beta * y).collect();
        prop_assert!(rel_vec_diff(vec(&lhs), &rhs) <= 1e-14);
    }

    #[test]
    fn sym_idempotent_and_splits(n in dims(), seed in any::<u64>()) {
        let a = rand_matrix(&mut rng(seed), n, n);
        let s = sym(&a).unwrap();
        prop_assert_eq!(sym(&s).unwrap(), s.clone());
        let k = a.sub(&s).unwrap();
        let tol = 1e-15 * a.fro_norm();
        for i in 0..n {
            for j in 0..n {
                prop_assert!((k[(i, j)] + k[(j, i)]).abs() <= tol);
                prop_assert!((s[(i, j)] + k[(i, j)] - a[(i, j)]).abs() <= tol);
            }
        }
    }

    #[test]
    fn fro_norm_matches_singular_values(a in any_matrix()) {
        let s = jacobi_svd(&a).unwrap().sigma;
        let f2 = a.fro_norm().powi(2);
        let s2: f64 = s.iter().map(|x| x * x).sum();
        prop_assert!((f2 - s2).abs() <= 1e-12 * f2.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn kron_matches_index_formula(b in any_matrix(), c in any_matrix()) {
        prop_assert_eq!(kron(&b, &c).unwrap(), kron_oracle(&b, &c));
    }

    #[test]
    fn kron_transpose_is_bit_identical(b in any_matrix(), c in any_matrix()) {
        prop_assert_eq!(kron(&b, &c).unwrap().transpose(), kron(&b.transpose(), &c.transpose()).unwrap());
    }

    #[test]
    fn kron_associative(a in any_matrix(), b in any_matrix(), c in any_matrix()) {
        let left = kron(&kron(&a, &b).unwrap(), &c).unwrap();
        let right = kron(&a, &kron(&b, &c).unwrap()).unwrap();
        for (x, y) in left.as_slice().iter().zip(right.as_slice()) {
            prop_assert!((x - y).abs() <= 1e-15 * x.abs().max(y.abs()));
        }
    }

    #[test]
    fn kron_operator_apply_matches_materialized(b in any_matrix(), c in any_matrix(), seed in any::<u64>()) {
        let op = KronOperator::new(b.clone(), c.clone());
        let x = rand_vec(&mut rng(seed), b.cols() * c.cols());
        let got = op.apply(&x).unwrap();
        let want = op.materialize().unwrap().matvec(&x).unwrap();
        let xn = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let bound = 1e-12 * b.fro_norm() * c.fro_norm() * xn;
        for (g, w) in got.iter().zip(&want) {
            prop_assert!((g - w).abs() <= bound.max(f64::MIN_POSITIVE));
        }
    }

    #[test]
    fn rearrange_is_linear(seed in any::<u64>(), idx in 0usize..200, alpha in -2.0f64..2.0, beta in -2.0f64..2.0) {
        let shapes = all_shapes();
        let shape = shapes[idx % shapes.len()];
        let (r, c) = shape.host_shape().unwrap();
        let mut g = rng(seed);
        let (a, a2) = (rand_matrix(&mut g, r, c), rand_matrix(&mut g, r, c));
        let lhs = rearrange(&a.scale(alpha).add(&a2.scale(beta)).unwrap(), shape).unwrap();
        let rhs = rearrange(&a, shape).unwrap().scale(alpha).add(&rearrange(&a2, shape).unwrap().scale(beta)).unwrap();
        prop_assert!(rel_diff(&lhs, &rhs) <= 1e-15);
    }

    #[test]
    fn linearize_roundtrip(bounds in proptest::collection::vec(1usize..=4, 1..=4)) {
        let total: usize = bounds.iter().product();
        for lin in 0..total {
            let idx = delinearize(lin, &bounds).unwrap();
            prop_assert_eq!(linearize(&idx, &bounds).unwrap(), lin);
            let expected: usize = idx.iter().zip(&bounds).rev().fold(0, |acc, (&i, &n)| acc * n + i);
            prop_assert_eq!(expected, lin);
        }
    }
}

#[test]
fn mixed_product_and_vec_trick() {
    let mut g = rng(11);
    for _ in 0..100 {
        let (m, n, p, q, r, s) = (2, 3, 2, 4, 3, 2);
        let (a, b) = (rand_matrix(&mut g, m, n), rand_matrix(&mut g, p, q));
        let (c, d) = (rand_matrix(&mut g, n, r), rand_matrix(&mut g, q, s));
        let lhs = kron(&a, &b).unwrap().matmul(&kron(&c, &d).unwrap()).unwrap();
        let rhs = kron(&a.matmul(&c).unwrap(), &b.matmul(&d).unwrap()).unwrap();
        assert!(rel_diff(&lhs, &rhs) <= 1e-12);

        // vec(C X Bᵀ) = (B ⊗ C) vec(X)
        let x = rand_matrix(&mut g, q, n);
        let cxb = b.matmul(&x).unwrap().matmul(&a.transpose()).unwrap();
        let kx = kron(&a, &b).unwrap().matvec(vec(&x)).unwrap();
        assert!(rel_vec_diff(&kx, vec(&cxb)) <= 1e-12);
        assert!(rel_vec_diff(&kron_matvec(&a, &b, vec(&x)).unwrap(), vec(&cxb)) <= 1e-12);

        let k = kron(&a, &b).unwrap();
        let prod = a.fro_norm() * b.fro_norm();
        assert!((k.fro_norm() - prod).abs() <= 1e-13 * prod);
    }
}

#[test]
fn kron_matvec_3x2_by_2x4() {
    let mut g = rng(5);
    let (b, c) = (rand_matrix(&mut g, 3, 2), rand_matrix(&mut g, 2, 4));
    let x = rand_vec(&mut g, 8);
    let want = kron_oracle(&b, &c).matvec(&x).unwrap();
    assert!(rel_vec_diff(&kron_matvec(&b, &c, &x).unwrap(), &want) <= 1e-12);
}

#[test]
fn blockvec_roundtrip_all_shapes() {
    let mut g = rng(3);
    for shape in all_shapes() {
        let (r, c) = shape.host_shape().unwrap();
        let a = rand_matrix(&mut g, r, c);
        let v = blockvec(&a, shape).unwrap();
        assert_eq!(v.shape(), (shape.m * shape.n * shape.p, shape.q));
        assert_eq!(blockmat(&v, shape).unwrap(), a);
        assert_eq!(sorted_bits(v.as_slice()), sorted_bits(a.as_slice()));
        assert_eq!(v.fro_norm().to_bits(), a.fro_norm().to_bits());
        // stacked block k = i + j·m, entry (s, t)
        for i in 0..shape.m {
            for j in 0..shape.n {
                let k = i + j * shape.m;
                for s in 0..shape.p {
                    for t in 0..shape.q {
                        assert_eq!(v[(k * shape.p + s, t)], a[(i * shape.p + s, j * shape.q + t)]);
                    }
                }
            }
        }
    }
}

#[test]
fn rearrange_invariants_all_shapes() {
    let mut g = rng(4);
    for shape in all_shapes() {
        let (r, c) = shape.host_shape().unwrap();
        for _ in 0..5 {
            let a = rand_matrix(&mut g, r, c);
            let t = rearrange(&a, shape).unwrap();
            assert_eq!(unrearrange(&t, shape).unwrap(), a);
            assert_eq!(sorted_bits(t.as_slice()), sorted_bits(a.as_slice()));
            assert_eq!(t.fro_norm().to_bits(), a.fro_norm().to_bits());

            // row k = vec(A_ij)ᵀ, compared against blockvec's stacking
            let v = blockvec(&a, shape).unwrap();
            for k in 0..shape.grid_len() {
                for s in 0..shape.p {
                    for tt in 0..shape.q {
                        assert_eq!(t[(k, s + tt * shape.p)], v[(k * shape.p + s, tt)]);
                    }
                }
            }

            let b = rand_matrix(&mut g, shape.m, shape.n);
            let cc = rand_matrix(&mut g, shape.p, shape.q);
            let tk = rearrange(&kron(&b, &cc).unwrap(), shape).unwrap();
            assert_eq!(tk, DenseMatrix::outer(vec(&b), vec(&cc)).unwrap());
            assert_eq!(
                unrearrange(&DenseMatrix::outer(vec(&b), vec(&cc)).unwrap(), shape).unwrap(),
                kron(&b, &cc).unwrap()
            );

            // tensor view reshaped with (i, j) as rows, (s, t) as cols
            let x = matrix_to_tensor4(&a, shape).unwrap();
            for s in 0..shape.p {
                for tt in 0..shape.q {
                    for i in 0..shape.m {
                        for j in 0..shape.n {
                            assert_eq!(x.get(&[s, tt, i, j]).unwrap(), t[(i + j * shape.m, s + tt * shape.p)]);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn rearrange_sum_correspondence() {
    let mut g = rng(8);
    let shape = BlockShape::new(3, 2, 2, 3).unwrap();
    for r in 1..=3 {
        let mut a = DenseMatrix::zeros(6, 6);
        let mut outer_sum = DenseMatrix::zeros(6, 6);
        for _ in 0..r {
            let b = rand_matrix(&mut g, 3, 2);
            let c = rand_matrix(&mut g, 2, 3);
            a = a.add(&kron(&b, &c).unwrap()).unwrap();
            outer_sum = outer_sum.add(&DenseMatrix::outer(vec(&b), vec(&c)).unwrap()).unwrap();
        }
        assert!(rel_diff(&rearrange(&a, shape).unwrap(), &outer_sum) <= 1e-14);
    }
}
