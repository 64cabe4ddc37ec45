//! Invariants under randomized inputs. Each case draws a seed and builds its
//! matrices, weights and polynomials from it.

mod common;

use common::*;
use matgauss::matpoly::{monic_from_jordan_pair, RESIDUAL_RTOL};
use matgauss::{
    apply, build_rule, lagrange_cardinals, matcore, psd_norm_check, stieltjes_recurrence,
    JordanPair, Matrix, MatrixPolynomial,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn symmetric(r: &mut ChaCha8Rng, p: usize) -> Matrix {
    let a = random_matrix(r, p, p);
    (&a + a.transpose()) * 0.5
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sym_eig_reconstructs(seed in any::<u64>(), p in 1usize..=6) {
        let a = symmetric(&mut rng(seed), p);
        let (vals, vecs) = matcore::sym_eig(&a).unwrap();
        prop_assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let lambda = Matrix::from_diagonal(&matgauss::Vector::from_vec(vals));
        prop_assert!((&vecs * lambda * vecs.transpose() - &a).amax() <= 1e-12);
        prop_assert!((vecs.transpose() * &vecs - Matrix::identity(p, p)).amax() <= 1e-12);
    }

    #[test]
    fn spd_sqrt_squares_back(seed in any::<u64>(), p in 1usize..=6) {
        let a = random_psd(&mut rng(seed), p, 0.05);
        let r = matcore::spd_sqrt(&a).unwrap();
        prop_assert!(matcore::asymmetry(&r) <= 1e-12);
        prop_assert!(matcore::min_eigenvalue(&r).unwrap() > 0.0);
        prop_assert!((&r * &r - &a).amax() <= 1e-11 * (1.0 + a.amax()));
    }

    #[test]
    fn nullspace_of_rank_deficient(seed in any::<u64>(), p in 2usize..=6, deficit in 1usize..=2) {
        let mut r = rng(seed);
        let rank = p.saturating_sub(deficit).max(1);
        let a = random_matrix(&mut r, p, rank) * random_matrix(&mut r, rank, p);
        let n = matcore::nullspace(&a, 1e-8);
        prop_assert_eq!(n.ncols(), p - rank);
        prop_assert!((&a * &n).amax() <= 1e-10 * (1.0 + a.amax()));
        prop_assert!((n.transpose() * &n - Matrix::identity(p - rank, p - rank)).amax() <= 1e-12);
    }

    #[test]
    fn products_evaluate_pointwise(seed in any::<u64>(), p in 1usize..=4, da in 0usize..=4, db in 0usize..=4) {
        let mut r = rng(seed);
        let (a, b) = (random_poly(&mut r, p, da), random_poly(&mut r, p, db));
        let x = r.random_range(-1.5..1.5);
        let prod = &a * &b;
        prop_assert!((prod.eval(x) - a.eval(x) * b.eval(x)).amax() <= 1e-12 * (1.0 + a.norm() * b.norm()));
        prop_assert!(prod.transpose().max_abs_diff(&(&b.transpose() * &a.transpose())) <= 1e-13 * (1.0 + prod.norm()));
    }

    #[test]
    fn right_division_reconstructs(seed in any::<u64>(), p in 1usize..=4, dq in 0usize..=3, dd in 1usize..=3) {
        let mut r = rng(seed);
        let d = random_monic(&mut r, p, dd);
        let num = random_poly(&mut r, p, dq + dd);
        let (q, rem) = num.right_divide(&d).unwrap();
        prop_assert!(rem.degree().is_none_or(|k| k < dd));
        let scale = num.norm() * (1.0 + d.norm()).powi(dq as i32 + 1);
        prop_assert!(num.max_abs_diff(&(&(&q * &d) + &rem)) <= 1e-11 * scale);
        // an exact multiple divides with zero remainder
        let (q2, rem2) = (&q * &d).right_divide(&d).unwrap();
        prop_assert!(rem2.norm() <= 1e-10 * scale);
        prop_assert!(q2.max_abs_diff(&q) <= 1e-10 * scale);
    }

    #[test]
    fn companion_triple_is_standard(seed in any::<u64>(), p in 1usize..=3, n in 1usize..=4) {
        let q = random_monic(&mut rng(seed), p, n);
        let triple = q.companion_triple().unwrap();
        prop_assert!(triple.is_standard_for(&q, 1e-10));
    }

    #[test]
    fn monic_from_pair_has_that_pair(seed in any::<u64>(), p in 1usize..=3, n in 1usize..=3) {
        let mut r = rng(seed);
        let nodes: Vec<f64> = (0..n * p).map(|k| k as f64 * 0.7 + r.random_range(-0.2..0.2)).collect();
        let vectors: Vec<Matrix> = (0..n * p).map(|_| random_matrix(&mut r, p, 1)).collect();
        let pair = JordanPair::lagrange(&nodes, &vectors).unwrap();
        let q = monic_from_jordan_pair(&pair, n).unwrap();
        prop_assert!(q.is_monic(1e-12));
        prop_assert!(q.is_right_divisor(&pair, RESIDUAL_RTOL));
        for (x, v) in nodes.iter().zip(&vectors) {
            prop_assert!((q.eval(*x) * v).amax() <= 1e-8 * (1.0 + q.norm()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn recurrence_family_is_orthonormal(seed in any::<u64>(), p in 1usize..=3, depth in 1usize..=8, shifted in any::<bool>()) {
        let w = random_weight(&mut rng(seed), p, shifted);
        let rec = stieltjes_recurrence(&w, depth).unwrap();
        let wn = rec.weight().unwrap();
        // rounding in the monomial coefficients bounds the attainable accuracy
        let moment_max = (0..=2 * depth).map(|k| wn.moment(k).unwrap().amax()).fold(0.0, f64::max);
        for i in 0..=depth {
            for j in 0..=i {
                let (pi, pj) = (rec.polynomial(i).unwrap(), rec.polynomial(j).unwrap());
                let g = wn.inner_product(pi, pj).unwrap();
                let want = if i == j { Matrix::identity(p, p) } else { Matrix::zeros(p, p) };
                let tol = 1e-9 + 64.0 * f64::EPSILON * pi.norm() * pj.norm() * moment_max;
                prop_assert!((g - want).amax() <= tol, "⟨P_{}, P_{}⟩", i, j);
            }
        }
        for d in rec.d() {
            prop_assert!(matcore::min_eigenvalue(d).unwrap() > 0.0);
        }
    }

    #[test]
    fn rule_weights_are_psd_and_sum_to_total_mass(seed in any::<u64>(), p in 1usize..=4, n in 1usize..=8) {
        let w = random_weight(&mut rng(seed), p, false);
        let (_, spec, rule) = build_rule(&w, n).unwrap();
        let total: usize = spec.mults().iter().sum();
        prop_assert_eq!(total, n * p);
        let sum = rule.weights().iter().fold(Matrix::zeros(p, p), |acc, l| acc + l);
        prop_assert!((sum - Matrix::identity(p, p)).amax() <= 1e-10);
        for l in rule.weights() {
            prop_assert!(matcore::is_psd(l, 1e-10));
        }
        prop_assert!(psd_norm_check(rule.weights()).unwrap());
        // with the denormalizer applied the rule integrates I·W·I to the total mass
        let i = MatrixPolynomial::identity(p);
        let mass = w.moment(0).unwrap();
        prop_assert!((apply(&rule, &i, &i).unwrap() - &mass).amax() <= 1e-10 * (1.0 + mass.amax()));
    }

    #[test]
    fn cardinals_are_biorthogonal_on_rootvectors(seed in any::<u64>(), p in 1usize..=3, n in 1usize..=6) {
        let w = random_weight(&mut rng(seed), p, false);
        let (_, spec, _) = build_rule(&w, n).unwrap();
        let cards = lagrange_cardinals(spec.pair()).unwrap();
        prop_assert_eq!(cards.len(), spec.nodes().len());
        for (i, wi) in cards.iter().enumerate() {
            prop_assert!(wi.degree().is_none_or(|d| d < n));
            for (j, (x, v)) in spec.nodes().iter().zip(spec.rootvecs()).enumerate() {
                let want = if i == j { v.clone() } else { Matrix::zeros(v.nrows(), v.ncols()) };
                let got = wi.eval(*x) * v;
                prop_assert!((got - want).amax() <= 1e-8 * (1.0 + wi.norm()), "W_{} at node {}", i, j);
            }
        }
    }
}
