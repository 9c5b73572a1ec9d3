//! Property tests across the linear algebra kernel, finite systems, the
//! symbolic models and the verdict engine.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use twosub::cli::selftest::random_compact_spec;
use twosub::finsys::{
    classify_bounded_fin, classify_unitary_fin, dim_quadruple, graph_system, oblique_projection, quiver_iso_a2,
    witness_graph_bounded, FiniteSystem,
};
use twosub::linalg::{
    orthonormality_error, principal_angles, random_invertible, random_orthogonal, rank, svd, Matrix,
};
use twosub::seqclassify::{classify_bounded_graph, Relation};
use twosub::seqmodel::SpectralCount;

fn entry() -> impl Strategy<Value = f64> {
    (-100i32..=100).prop_map(|x| f64::from(x) / 10.0)
}

fn matrix(max: usize) -> impl Strategy<Value = Matrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(entry(), r * c).prop_map(move |d| Matrix::new(r, c, d).unwrap())
    })
}

fn low_rank(max: usize) -> impl Strategy<Value = Matrix> {
    (matrix(max), any::<u64>()).prop_map(|(m, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = 1 + (seed as usize) % m.cols();
        let left = Matrix::random(m.rows(), k, &mut rng);
        let right = Matrix::random(k, m.cols(), &mut rng);
        left.matmul(&right).unwrap()
    })
}

fn rel_close(a: &Matrix, b: &Matrix, tol: f64) -> bool {
    a.sub(b).unwrap().max_abs() <= tol * (1.0 + b.max_abs())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn svd_reconstructs_with_orthonormal_factors(m in matrix(7)) {
        let s = svd(&m).unwrap();
        prop_assert!(rel_close(&s.reconstruct(), &m, 1e-10));
        prop_assert!(orthonormality_error(&s.u) < 1e-10);
        prop_assert!(orthonormality_error(&s.v) < 1e-10);
        prop_assert!(s.sigma.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(s.sigma.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn rank_of_product_is_bounded(m in low_rank(7)) {
        let r = rank(&m, None).unwrap();
        prop_assert!(r <= m.rows().min(m.cols()));
        prop_assert_eq!(r, rank(&m.transpose(), None).unwrap());
    }

    #[test]
    fn principal_angles_are_orthogonally_invariant(n in 2usize..9, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k1 = 1 + (seed as usize) % (n - 1);
        let k2 = 1 + (seed as usize / 7) % (n - 1);
        let u = random_orthogonal(n, &mut rng).select_cols(&(0..k1).collect::<Vec<_>>());
        let v = random_orthogonal(n, &mut rng).select_cols(&(0..k2).collect::<Vec<_>>());
        let q = random_orthogonal(n, &mut rng);
        let before = principal_angles(&u, &v).unwrap();
        let after = principal_angles(&q.matmul(&u).unwrap(), &q.matmul(&v).unwrap()).unwrap();
        prop_assert_eq!(before.len(), k1.min(k2));
        for (a, b) in before.iter().zip(&after) {
            prop_assert!((a - b).abs() < 1e-8);
            prop_assert!((0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(a));
        }
    }

    #[test]
    fn quadruple_is_invariant_under_invertible_maps(t in low_rank(5), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = graph_system(&t).unwrap();
        let q = random_invertible(s.ambient_dim(), 10.0, &mut rng);
        let moved = s.transformed(&q).unwrap();
        prop_assert_eq!(dim_quadruple(&s).unwrap(), dim_quadruple(&moved).unwrap());
        prop_assert!(classify_bounded_fin(&s, &moved).unwrap());
    }

    #[test]
    fn unitary_isomorphism_implies_bounded(a in low_rank(4), b in low_rank(4), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sa = graph_system(&a).unwrap();
        let q = random_orthogonal(sa.ambient_dim(), &mut rng);
        let rotated = sa.transformed(&q).unwrap();
        prop_assert!(classify_unitary_fin(&sa, &rotated).unwrap());
        let sb = graph_system(&b).unwrap();
        if classify_unitary_fin(&sa, &sb).unwrap() {
            prop_assert!(classify_bounded_fin(&sa, &sb).unwrap());
        }
    }

    #[test]
    fn graph_witness_exists_iff_ranks_agree(a in low_rank(5), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = random_invertible(a.rows(), 5.0, &mut rng);
        let m = random_invertible(a.cols(), 5.0, &mut rng);
        let b = l.matmul(&a).unwrap().matmul(&m).unwrap();
        let w = witness_graph_bounded(&a, &b).unwrap();
        prop_assert!(w.is_some());
        prop_assert!(quiver_iso_a2(&a, &b).unwrap());
        let w = w.unwrap();
        prop_assert!(w.residuals.0 < 1e-8 && w.residuals.1 < 1e-8);
    }

    #[test]
    fn oblique_projection_is_idempotent(n in 2usize..8, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = 1 + (seed as usize) % (n - 1);
        let basis = random_invertible(n, 5.0, &mut rng);
        let e1 = basis.select_cols(&(0..k).collect::<Vec<_>>());
        let e2 = basis.select_cols(&(k..n).collect::<Vec<_>>());
        let p = oblique_projection(&e1, &e2).unwrap().expect("complementary");
        prop_assert!(rel_close(&p.matmul(&p).unwrap(), &p, 1e-8));
        prop_assert!(rel_close(&p.matmul(&e1).unwrap(), &e1, 1e-8));
        prop_assert!(p.matmul(&e2).unwrap().max_abs() < 1e-8 * (1.0 + p.max_abs()));
        let s = FiniteSystem::from_spanning(n, &e1, &e2).unwrap();
        let q = dim_quadruple(&s).unwrap();
        prop_assert_eq!((q.d_meet, q.d_coker), (0, 0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn counting_matches_isolated_counts(seed in any::<u64>(), lo in 1u32..200, width in 1u32..200) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_compact_spec(&mut rng);
        let alpha = f64::from(lo) / 400.0;
        let beta = alpha * (1.0 + f64::from(width) / 50.0);
        let got = spec.counting(alpha, beta).unwrap();
        if spec.flat_meets(alpha, beta) {
            prop_assert_eq!(got, SpectralCount::Infinite);
        } else {
            let above = spec.count_above_isolated(alpha, false).unwrap().finite().unwrap();
            let strictly = spec.count_above_isolated(beta, true).unwrap().finite().unwrap();
            prop_assert_eq!(got, SpectralCount::Finite(above - strictly));
        }
    }

    #[test]
    fn mu_sequence_is_nonincreasing(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_compact_spec(&mut rng);
        let mu = spec.mu_sequence(500).unwrap();
        prop_assert!(mu.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(mu.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn verdicts_are_reflexive_and_symmetric(s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = random_compact_spec(&mut ChaCha8Rng::seed_from_u64(s1));
        let b = random_compact_spec(&mut ChaCha8Rng::seed_from_u64(s2));
        prop_assert_eq!(classify_bounded_graph(&a, &a).relation, Relation::BoundedlyIsomorphic);
        prop_assert_eq!(classify_bounded_graph(&a, &b).relation, classify_bounded_graph(&b, &a).relation);
    }
}
