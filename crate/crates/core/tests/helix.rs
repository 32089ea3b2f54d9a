use helixlab_core::catalog::builtin;
use helixlab_core::helix::{
    formulae_check, formulae_corpus, helix_angle, is_helix, laplacian_height_check,
    main_theorem_corpus, main_theorem_harness, structure_equation_residual,
};
use helixlab_core::numerics::{Tolerances, Vector};

fn e3() -> Vector {
    Vector::from_vec(vec![0.0, 0.0, 1.0])
}

#[test]
fn cone_identities() {
    let mut rng = Tolerances::default().rng();
    for k in [0.5, 1.0, 2.0] {
        let cone = builtin::cone(k, 0.3).unwrap();
        let a2 = 1.0 + k * k;
        for u in cone.samples(&mut rng, 100) {
            assert!(structure_equation_residual(&cone, &e3(), &u).unwrap() < 1e-6);
            let lh = laplacian_height_check(&cone, &e3(), &u).unwrap();
            assert!((lh.lhs - lh.rhs1).abs() < 1e-6 && (lh.lhs - lh.rhs2).abs() < 1e-6);
            // metric (1 + k²) dr² + r² dφ² gives Δ(k r) = k / ((1 + k²) r)
            let r = (u[0] * u[0] + u[1] * u[1]).sqrt();
            assert!((lh.lhs - k / (a2 * r)).abs() < 1e-9, "k={k} r={r}");
            let theta = helix_angle(&cone, &u, &e3()).unwrap();
            assert!((theta - (1.0 / k).atan()).abs() < 1e-12);
        }
    }
}

#[test]
fn cone_is_a_ruled_helix() {
    let mut rng = Tolerances::default().rng();
    let rep = is_helix(&builtin::cone(1.0, 0.3).unwrap(), &e3(), &mut rng, 20, 1e-9).unwrap();
    assert!(rep.is_helix && rep.is_ruled == Some(true) && !rep.is_cylinder);
}

#[test]
fn no_full_minimal_ruled_helix_in_corpus() {
    let mut rng = Tolerances::default().rng();
    let cases = main_theorem_corpus(&mut rng).unwrap();
    assert!(cases.len() >= 10);
    let outcomes = main_theorem_harness(&cases, &mut rng, 1e-6).unwrap();
    let mut checked = 0;
    for o in &outcomes {
        assert!(!o.counterexample, "{o:?}");
        assert!(!o.cylinder_mismatch, "{o:?}");
        if o.is_minimal && o.is_helix && o.is_ruled && o.theta > 1e-6 {
            assert!(o.affine_rank < o.n);
            checked += 1;
        }
    }
    assert!(checked >= 5, "only {checked} minimal ruled helices with positive angle");
}

#[test]
fn graph_minimality_criterion_on_corpus() {
    let mut rng = Tolerances::default().rng();
    let corpus = formulae_corpus().unwrap();
    assert!(corpus.len() >= 10);
    let (mut pos, mut neg) = (0, 0);
    for g in &corpus {
        let r = formulae_check(g, &mut rng, 30, 1e-5).unwrap();
        assert!(r.agree, "{}: {r:?}", g.name);
        if r.graph_minimal {
            pos += 1;
        } else {
            neg += 1;
        }
    }
    assert!(pos >= 3 && neg >= 3);
}
