//! The acceptance criteria, each as a list of checks.

use helixlab_core::catalog::builtin;
use helixlab_core::catalog::ScalarField;
use helixlab_core::check::{all_pass, Check};
use helixlab_core::helix::{
    formulae_check, formulae_corpus, laplacian_height_check, main_theorem_corpus,
    main_theorem_harness, structure_equation_residual,
};
use helixlab_core::intrinsic::{comparison_report, helix_metric, laplacian, sol_verification, MetricChart};
use helixlab_core::numerics::{Mat, Rng, Tolerances, Vector};
use helixlab_core::offset::families::{
    corollary_corpus, offset_corpus, parallel_complex_lines, parallel_planes, sphere_outward,
    t_grid_for,
};
use helixlab_core::offset::{
    foliation_flatness_check, minimal_offsets_certificate, offset_data, offset_metric_from,
    offset_oracle, offset_shape_trace_from, FoliationVerdict, NormalField,
};
use helixlab_core::trace_lemma::{default_s_grid, lemma_la_decision, random_triple, trace_rational, SymmetricTriple};
use helixlab_core::Result;

pub const SOL_TOL: f64 = 1e-8;
pub const OFFSET_FIELDS: usize = 50;
pub const OFFSET_TOL: f64 = 1e-6;
pub const LEMMA_TRIALS: usize = 500;
pub const LEMMA_TOL: f64 = 1e-9;
pub const FORMULAE_TOL: f64 = 1e-5;
pub const COMPARISON_TOL: f64 = 1e-5;
pub const CONE_SAMPLES: usize = 100;
pub const CONE_TOL: f64 = 1e-6;
pub const HARNESS_THETA_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Criterion {
    pub id: &'static str,
    pub title: &'static str,
    pub records: Vec<Check>,
}

impl Criterion {
    pub fn passed(&self) -> bool {
        !self.records.is_empty() && all_pass(&self.records)
    }
}

fn rng(seed: u64, stream: u64) -> Rng {
    Tolerances::with_seed(seed).rng_stream(stream)
}

pub fn sol_exactness() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for z in [-0.5, 0.0, 0.3] {
        for mut c in sol_verification([0.2, -0.4, z], SOL_TOL)? {
            c.name = format!("{}@z={z}", c.name);
            out.push(c);
        }
    }
    Ok(out)
}

/// Worst relative mismatch of the metric and trace formulas against the
/// offset chart over `grid` (or each field's own grid), one pair of
/// checks per field.
pub fn offset_records(
    fields: &[NormalField],
    rng: &mut Rng,
    grid: Option<&[f64]>,
    tol: f64,
) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (i, field) in fields.iter().enumerate() {
        let grid = match grid {
            Some(g) => g.to_vec(),
            None => t_grid_for(field, rng, 20)?,
        };
        let u = field.base.sample(rng);
        let data = offset_data(field, &u)?;
        let (mut gw, mut tw) = ((0.0, 0.0, 0.0_f64), (0.0, 0.0, 0.0_f64));
        for &t in &grid {
            let g = offset_metric_from(&data, t)?;
            let tr = offset_shape_trace_from(&data, t)?;
            let oracle = offset_oracle(field, &data, t)?;
            let gr = (&g - &oracle.metric).amax() / oracle.metric.amax().max(1.0);
            if gr >= gw.2 {
                gw = (g.norm(), oracle.metric.norm(), gr);
            }
            let trr = (tr - oracle.trace).abs() / oracle.trace.abs().max(1.0);
            if trr >= tw.2 {
                tw = (tr, oracle.trace, trr);
            }
        }
        let tag = format!("{i}:{}", field.name);
        out.push(Check::norms(format!("metric[{tag}]"), "metric", gw.0, gw.1, gw.2, tol));
        out.push(Check::norms(format!("trace[{tag}]"), "traceofshape", tw.0, tw.1, tw.2, tol));
    }
    Ok(out)
}

pub fn offset_equivalence(seed: u64) -> Result<Vec<Check>> {
    let mut rng = rng(seed, 2);
    let fields = offset_corpus(&mut rng, OFFSET_FIELDS)?;
    offset_records(&fields, &mut rng, None, OFFSET_TOL)
}

fn diag(v: &[f64]) -> Mat {
    Mat::from_diagonal(&Vector::from_column_slice(v))
}

pub fn lemma_property(seed: u64) -> Result<Vec<Check>> {
    let mut rng = rng(seed, 3);
    let mut false_positives = 0usize;
    let mut nonzero = 0usize;
    for i in 0..LEMMA_TRIALS {
        let k = 1 + i % 6;
        let t = random_triple(&mut rng, k);
        let d = lemma_la_decision(&t, &default_s_grid(k), LEMMA_TOL)?;
        nonzero += usize::from(!d.triple_is_zero);
        false_positives += usize::from(d.is_counterexample());
    }
    let mut out = vec![
        Check::scalar("false_positives", "LA", false_positives as f64, 0.0, 0.5),
        Check::flag("nonzero_triples_tested", "LA", nonzero > LEMMA_TRIALS / 2, true),
    ];
    let one = SymmetricTriple::new(diag(&[1.0, 0.0]), Mat::zeros(2, 2))?;
    for s in [0.0, 0.25, 0.5, 0.75] {
        out.push(Check::scalar(
            format!("phi_diag10({s})"),
            "LA",
            trace_rational(&one, s)?,
            1.0 / (1.0 - s),
            1e-10,
        ));
    }
    for k in [1usize, 3, 6] {
        let t = SymmetricTriple::new(Mat::zeros(k, k), Mat::identity(k, k))?;
        for s in [0.5, 1.0, 2.0] {
            out.push(Check::scalar(
                format!("phi_identity_n(k={k},{s})"),
                "LA",
                trace_rational(&t, s)?,
                -(k as f64) * s / (1.0 + s * s),
                1e-10,
            ));
        }
    }
    Ok(out)
}

pub fn formulae_biconditional(seed: u64) -> Result<Vec<Check>> {
    let mut rng = rng(seed, 4);
    let mut out = Vec::new();
    let corpus = formulae_corpus()?;
    out.push(Check::flag("corpus_size>=10", "formulae", corpus.len() >= 10, true));
    for g in &corpus {
        let r = formulae_check(g, &mut rng, 30, FORMULAE_TOL)?;
        out.push(Check::flag(
            format!("agree[{}]", g.name),
            "formulae",
            r.graph_minimal,
            r.conditions_hold,
        ));
    }
    Ok(out)
}

/// Worst residual of each comparison relation over `points`.
pub fn worst_relations(
    g: &MetricChart,
    f: &ScalarField,
    points: &[Vec<f64>],
    label: &str,
    tol: f64,
) -> Result<Vec<Check>> {
    let mut worst: Vec<Check> = Vec::new();
    for u in points {
        let rep = comparison_report(g, f, u, tol)?;
        for c in rep.relations {
            match worst.iter_mut().find(|w| w.name == c.name) {
                Some(w) if w.residual >= c.residual => {}
                Some(w) => *w = c,
                None => worst.push(c),
            }
        }
    }
    for c in &mut worst {
        c.name = format!("{}[{label}]", c.name);
    }
    Ok(worst)
}

pub fn comparison_suite(seed: u64) -> Result<Vec<Check>> {
    let mut rng = rng(seed, 5);
    let flat = MetricChart::flat(2, 2.0);
    let radial = ScalarField::radial(vec![0.0, 0.0], 1.0);
    let points: Vec<Vec<f64>> = (0..20)
        .map(|_| loop {
            let u = flat.domain.sample(&mut rng);
            if u[0].hypot(u[1]) > 0.3 {
                break u;
            }
        })
        .collect();
    let mut out = worst_relations(&flat, &radial, &points, "radial", COMPARISON_TOL)?;
    let h = helix_metric(&flat, &radial);
    let mut lap = (0.0, 0.0, -1.0_f64);
    for u in &points {
        let got = laplacian(&h, &radial, u)?;
        let want = 1.0 / (2.0 * u[0].hypot(u[1]));
        if (got - want).abs() > lap.2 {
            lap = (got, want, (got - want).abs());
        }
    }
    out.push(Check::scalar("laplacian_h=1/(2r)", "coro:laplacian", lap.0, lap.1, COMPARISON_TOL));

    let unit = MetricChart::flat(2, 1.0);
    for theta in [0.3_f64, 0.7, 1.2] {
        let f = ScalarField::linear(vec![theta.tan(), 0.0], 0.0);
        let pts = unit.domain.samples(&mut rng, 10);
        out.extend(worst_relations(&unit, &f, &pts, &format!("tilted({theta})"), COMPARISON_TOL)?);
    }
    Ok(out)
}

pub fn cone_identities(seed: u64) -> Result<Vec<Check>> {
    let mut rng = rng(seed, 6);
    let d = Vector::from_vec(vec![0.0, 0.0, 1.0]);
    let mut out = Vec::new();
    for k in [0.5, 1.0, 2.0] {
        let cone = builtin::cone(k, 0.3)?;
        let (mut se, mut lh) = (0.0_f64, 0.0_f64);
        for u in cone.samples(&mut rng, CONE_SAMPLES) {
            se = se.max(structure_equation_residual(&cone, &d, &u)?);
            let l = laplacian_height_check(&cone, &d, &u)?;
            lh = lh.max((l.lhs - l.rhs1).abs()).max((l.lhs - l.rhs2).abs());
        }
        out.push(Check::below(format!("structure_equation[cone({k})]"), "coro:laplacian", se, CONE_TOL));
        out.push(Check::below(format!("laplacian_height[cone({k})]"), "coro:laplacian", lh, CONE_TOL));
    }
    Ok(out)
}

pub fn main_theorem(seed: u64) -> Result<Vec<Check>> {
    let mut rng = rng(seed, 7);
    let cases = main_theorem_corpus(&mut rng)?;
    let outcomes = main_theorem_harness(&cases, &mut rng, HARNESS_THETA_TOL)?;
    let mut out = Vec::new();
    let mut counterexamples = 0usize;
    for o in &outcomes {
        counterexamples += usize::from(o.counterexample);
        if o.is_minimal && o.is_helix && o.is_ruled && o.theta > HARNESS_THETA_TOL {
            out.push(Check::flag(format!("not_full[{}]", o.name), "maintheorem", o.full, false));
        }
        if o.expect_cylinder {
            out.push(Check::flag(format!("is_cylinder[{}]", o.name), "maintheorem", o.is_cylinder, true));
        }
    }
    out.push(Check::scalar("counterexamples", "maintheorem", counterexamples as f64, 0.0, 0.5));
    Ok(out)
}

pub fn offsets_corollary(seed: u64) -> Result<Vec<Check>> {
    let mut rng = rng(seed, 8);
    let mut out = Vec::new();
    for field in corollary_corpus(&mut rng)? {
        let grid = t_grid_for(&field, &mut rng, 20)?;
        let cert = minimal_offsets_certificate(&field, &grid, &mut rng, 12, 1e-6)?;
        out.push(Check::flag(
            format!("minimal=>constant[{}]", field.name),
            "offsets",
            !cert.offsets_minimal || cert.eta_constant,
            true,
        ));
    }
    let grid = [-0.5, -0.25, 0.25, 0.5, 1.0];
    for (label, field) in [("planes", parallel_planes()?), ("complex_lines", parallel_complex_lines()?)] {
        let v = foliation_flatness_check(&field, &grid, &mut rng, 12, 1e-6)?;
        out.push(Check::flag(
            format!("totally_geodesic[{label}]"),
            "MinimalRiemannianFoliation",
            matches!(v, FoliationVerdict::TotallyGeodesic { .. }),
            true,
        ));
    }
    let spheres = sphere_outward(1.0)?;
    let v = foliation_flatness_check(&spheres, &[0.1, 0.2, 0.3, 0.4, 0.5], &mut rng, 12, 1e-6)?;
    out.push(Check::flag(
        "rejected[nested_spheres]",
        "MinimalRiemannianFoliation",
        matches!(v, FoliationVerdict::NotMinimalFoliation { .. }),
        true,
    ));
    Ok(out)
}

/// Criteria 1 to 8; the determinism criterion compares two runs of these.
pub fn run_criteria(seed: u64) -> Result<Vec<Criterion>> {
    Ok(vec![
        Criterion { id: "AC1", title: "Sol geometry values", records: sol_exactness()? },
        Criterion { id: "AC2", title: "offset metric and trace vs offset chart", records: offset_equivalence(seed)? },
        Criterion { id: "AC3", title: "trace lemma property suite", records: lemma_property(seed)? },
        Criterion { id: "AC4", title: "graph minimality criterion", records: formulae_biconditional(seed)? },
        Criterion { id: "AC5", title: "metric comparison relations", records: comparison_suite(seed)? },
        Criterion { id: "AC6", title: "structure equation and height Laplacian on cones", records: cone_identities(seed)? },
        Criterion { id: "AC7", title: "minimal ruled helix falsification harness", records: main_theorem(seed)? },
        Criterion { id: "AC8", title: "minimal offsets and flat foliations", records: offsets_corollary(seed)? },
    ])
}

/// All records of `criteria`, with names prefixed by the criterion id.
pub fn flatten(criteria: &[Criterion]) -> Vec<Check> {
    criteria
        .iter()
        .flat_map(|c| {
            c.records.iter().map(move |r| {
                let mut r = r.clone();
                r.name = format!("{}.{}", c.id, r.name);
                r
            })
        })
        .collect()
}
