use helixlab_core::numerics::{Mat, Tolerances, Vector};
use helixlab_core::trace_lemma::{
    default_s_grid, kernel_split, lemma_la_decision, random_commuting_triple, random_triple,
    rationality_residual, substituted_trace, trace_rational, SymmetricTriple,
};
use helixlab_core::GeomError;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn triple_from_seed(seed: u64, k: usize) -> SymmetricTriple {
    random_triple(&mut ChaCha8Rng::seed_from_u64(seed), k)
}

/// `φ` through eigenvalues when `D` and `N` commute: each joint eigenpair
/// `(d, n)` contributes `(d - s(d² + n)) / (1 - 2sd + s²(d² + n))`.
fn commuting_phi(d: &[f64], n: &[f64], s: f64) -> f64 {
    d.iter()
        .zip(n)
        .map(|(&d, &n)| {
            let h = d * d + n;
            (d - s * h) / (1.0 - 2.0 * s * d + s * s * h)
        })
        .sum()
}

#[test]
fn closed_forms() {
    let d = Mat::from_diagonal(&Vector::from_vec(vec![1.0, 0.0]));
    let t = SymmetricTriple::new(d, Mat::zeros(2, 2)).unwrap();
    for s in [0.0, 0.1, 0.3, 0.5, 0.9, -2.0] {
        assert!((trace_rational(&t, s).unwrap() - 1.0 / (1.0 - s)).abs() < 1e-10);
    }
    for k in 1..=6 {
        let t = SymmetricTriple::new(Mat::zeros(k, k), Mat::identity(k, k)).unwrap();
        for s in [0.2, 0.5, 1.0, 3.0] {
            let expected = -(k as f64) * s / (1.0 + s * s);
            assert!((trace_rational(&t, s).unwrap() - expected).abs() < 1e-10);
        }
    }
}

#[test]
fn no_nonzero_triple_has_vanishing_phi() {
    let mut rng = Tolerances::default().rng();
    let mut counterexamples = 0;
    for i in 0..500 {
        let k = 1 + i % 6;
        let t = random_triple(&mut rng, k);
        let dec = lemma_la_decision(&t, &default_s_grid(k), 1e-9).unwrap();
        if dec.is_counterexample() {
            counterexamples += 1;
        }
        assert!(dec.triple_is_zero || !dec.phi_identically_zero);
    }
    assert_eq!(counterexamples, 0);
}

#[test]
fn poles_are_reported() {
    let d = Mat::from_diagonal(&Vector::from_vec(vec![2.0]));
    let t = SymmetricTriple::new(d, Mat::zeros(1, 1)).unwrap();
    assert!(matches!(trace_rational(&t, 0.5), Err(GeomError::PoleAt { .. })));
    assert!(matches!(substituted_trace(&t, 2.0), Err(GeomError::PoleAt { .. })));
}

#[test]
fn small_t_limit_is_minus_k() {
    let mut rng = Tolerances::default().rng();
    for k in 1..=6 {
        let t = random_commuting_triple(&mut rng, k);
        let split = kernel_split(&t, 1e-9).unwrap();
        let rank = split.complement_basis.ncols() as f64;
        if rank == 0.0 {
            continue;
        }
        let reduced = SymmetricTriple::new(split.d1.clone(), split.n1.clone()).unwrap();
        let v = substituted_trace(&reduced, 1e-6).unwrap();
        assert!((v + rank).abs() < 1e-3, "k={k} rank={rank} v={v}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn substitution_identity(seed in any::<u64>(), k in 1usize..=6, t in 0.2f64..20.0) {
        let tr = triple_from_seed(seed, k);
        if let (Ok(a), Ok(b)) = (substituted_trace(&tr, t), trace_rational(&tr, 1.0 / t)) {
            prop_assert!((t * a - b).abs() < 1e-10 * b.abs().max(1.0), "{} vs {}", t * a, b);
        }
    }

    #[test]
    fn phi_is_rational_of_bounded_degree(seed in any::<u64>(), k in 1usize..=6) {
        let tr = triple_from_seed(seed, k);
        let held_out = [0.013, 0.137, 0.251, 0.377, 0.49];
        match rationality_residual(&tr, &held_out) {
            Ok(r) => prop_assert!(r < 1e-8, "residual {r}"),
            Err(GeomError::PoleAt { .. }) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn kernel_of_h_is_in_kernels_of_d_and_n(seed in any::<u64>(), k in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tr = if seed % 2 == 0 {
            random_commuting_triple(&mut rng, k)
        } else {
            random_triple(&mut rng, k)
        };
        let split = kernel_split(&tr, 1e-9).unwrap();
        prop_assert!(split.d_on_ker < 1e-8 && split.n_on_ker < 1e-8);
        prop_assert!(split.block_residual < 1e-9);
    }

    #[test]
    fn commuting_triples_match_eigenvalue_formula(
        d in prop::collection::vec(-1.0f64..1.0, 1..=6),
        seed in any::<u64>(),
        s in 0.01f64..0.45,
    ) {
        let k = d.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n: Vec<f64> = (0..k).map(|i| ((seed >> i) & 7) as f64 / 7.0).collect();
        let q = helixlab_core::numerics::random_rotation(&mut rng, k);
        let dm = &q * Mat::from_diagonal(&Vector::from_vec(d.clone())) * q.transpose();
        let nm = &q * Mat::from_diagonal(&Vector::from_vec(n.clone())) * q.transpose();
        let tr = SymmetricTriple::new((&dm + dm.transpose()) * 0.5, (&nm + nm.transpose()) * 0.5).unwrap();
        if let Ok(v) = trace_rational(&tr, s) {
            let expected = commuting_phi(&d, &n, s);
            prop_assert!((v - expected).abs() < 1e-9 * expected.abs().max(1.0));
        }
    }
}
