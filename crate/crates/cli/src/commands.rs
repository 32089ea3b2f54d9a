use std::collections::BTreeMap;
use std::time::Instant;

use rand::Rng as _;
use serde_json::{json, Value};

use helixlab_core::catalog::poly::load_poly;
use helixlab_core::catalog::{graph_immersion, parse_selector, split_selector, ImmersionChart, Params, ScalarField};
use helixlab_core::check::Check;
use helixlab_core::extrinsic::minimality_report;
use helixlab_core::helix::{formulae_check, is_helix, laplacian_height_check, structure_equation_residual};
use helixlab_core::intrinsic::{sol_verification, MetricChart, EIKONAL_TOL};
use helixlab_core::numerics::{affine_rank, Mat, Rng, Tolerances, Vector};
use helixlab_core::offset::families::offset_corpus;
use helixlab_core::trace_lemma::{
    default_s_grid, kernel_split, lemma_la_decision, random_triple, rationality_residual,
    substituted_trace, trace_rational, SymmetricTriple,
};
use helixlab_core::GeomError;

use crate::config::{Command, RunConfig};
use crate::report::Report;
use crate::suite;
use crate::CliError;

type Observations = BTreeMap<String, Value>;

fn rng_for(cfg: &RunConfig) -> Rng {
    Tolerances::with_seed(cfg.seed).rng()
}

fn load_chart(cfg: &RunConfig, default: &str) -> Result<ImmersionChart, CliError> {
    Ok(match (&cfg.spec, &cfg.chart) {
        (Some(path), _) => load_poly(path)?,
        (None, Some(sel)) => parse_selector(sel)?,
        (None, None) => parse_selector(default)?,
    })
}

fn direction(cfg: &RunConfig, n: usize) -> Result<Vector, CliError> {
    match &cfg.direction {
        None => Ok(Vector::from_fn(n, |i, _| if i + 1 == n { 1.0 } else { 0.0 })),
        Some(d) if d.len() == n => Ok(Vector::from_column_slice(d)),
        Some(d) => Err(CliError::Config(format!(
            "--direction has {} components, chart is in R^{n}",
            d.len()
        ))),
    }
}

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    match cfg.command {
        Command::Analyze => cmd_analyze(cfg),
        Command::Offsets => cmd_offsets(cfg),
        Command::LemmaLa => cmd_lemma_la(cfg),
        Command::Sol => cmd_sol(cfg),
        Command::Project => cmd_project(cfg),
        Command::Suite => cmd_suite(cfg),
    }
}

pub fn cmd_analyze(cfg: &RunConfig) -> Result<Report, CliError> {
    let start = Instant::now();
    let chart = load_chart(cfg, "tilted_plane")?;
    if chart.codim() == 0 {
        return Err(CliError::Config(format!(
            "{} is an open set of R^{}, not a submanifold; use it as a `project` base",
            chart.name,
            chart.n()
        )));
    }
    let d = direction(cfg, chart.n())?;
    let mut rng = rng_for(cfg);
    let mut obs = Observations::new();
    let mut records = Vec::new();
    obs.insert("chart".into(), json!(chart.name));

    let minimal = minimality_report(&chart, &mut rng, cfg.samples, cfg.tol)?;
    obs.insert("is_minimal".into(), json!(minimal.is_minimal));
    obs.insert("max_mean_curvature".into(), json!(minimal.max_mean_curvature));

    let helix = is_helix(&chart, &d, &mut rng, cfg.samples, cfg.tol)?;
    obs.insert("is_helix".into(), json!(helix.is_helix));
    obs.insert("theta".into(), json!(helix.angle_mean));
    obs.insert("angle_spread".into(), json!(helix.angle_spread));
    obs.insert("is_ruled".into(), json!(helix.is_ruled));
    obs.insert("is_cylinder".into(), json!(helix.is_cylinder));

    let points: Vec<Vector> = chart
        .samples(&mut rng, 200)
        .iter()
        .map(|u| chart.point(u))
        .collect();
    let rank = affine_rank(&points, helixlab_core::helix::FULLNESS_CUTOFF);
    obs.insert("affine_rank".into(), json!(rank));
    obs.insert("full".into(), json!(rank == chart.n()));

    records.push(Check::flag(
        "helix_iff_eikonal_height",
        "teor:eikonalvshelix",
        helix.eikonal_residual < cfg.tol,
        helix.is_helix,
    ));
    let (mut lap, mut lap_sin, mut structure) = (0.0_f64, 0.0_f64, 0.0_f64);
    let check_t = helix.is_helix && helix.t_defined;
    for u in chart.samples(&mut rng, cfg.samples) {
        let l = laplacian_height_check(&chart, &d, &u)?;
        lap = lap.max((l.lhs - l.rhs1).abs());
        if check_t {
            lap_sin = lap_sin.max((l.lhs - l.rhs2).abs());
            structure = structure.max(structure_equation_residual(&chart, &d, &u)?);
        }
    }
    records.push(Check::below("laplacian_height=<H,d>", "coro:laplacian", lap, cfg.tol));
    if check_t {
        records.push(Check::below("laplacian_height=sin*<H,xi>", "coro:laplacian", lap_sin, cfg.tol));
        records.push(Check::below("structure_equation", "coro:laplacian", structure, cfg.tol));
    }
    Ok(Report::new(cfg, records, obs, start.elapsed()))
}

pub fn cmd_offsets(cfg: &RunConfig) -> Result<Report, CliError> {
    let start = Instant::now();
    let mut rng = rng_for(cfg);
    let fields = offset_corpus(&mut rng, cfg.trials)?;
    let mut records = suite::offset_records(&fields, &mut rng, cfg.t_grid.as_deref(), cfg.tol)?;
    records.extend(suite::offsets_corollary(cfg.seed)?);
    let mut obs = Observations::new();
    obs.insert("fields".into(), json!(fields.len()));
    obs.insert("offset_parameter".into(), json!("t with unit-length eta"));
    Ok(Report::new(cfg, records, obs, start.elapsed()))
}

pub fn cmd_lemma_la(cfg: &RunConfig) -> Result<Report, CliError> {
    let start = Instant::now();
    let mut rng = rng_for(cfg);
    let k = cfg.k;
    let grid = cfg.t_grid.clone().unwrap_or_else(|| default_s_grid(k));
    let (mut false_pos, mut nonzero) = (0usize, 0usize);
    let (mut subst, mut kernel, mut rational) = (0.0_f64, 0.0_f64, 0.0_f64);
    let held_out = [0.013, 0.137, 0.251, 0.377, 0.49];
    for _ in 0..cfg.trials {
        let t = random_triple(&mut rng, k);
        let dec = lemma_la_decision(&t, &grid, cfg.tol)?;
        false_pos += usize::from(dec.is_counterexample());
        nonzero += usize::from(!dec.triple_is_zero);

        let tt: f64 = rng.random_range(0.2..20.0);
        if let (Ok(a), Ok(b)) = (substituted_trace(&t, tt), trace_rational(&t, 1.0 / tt)) {
            subst = subst.max((tt * a - b).abs() / b.abs().max(1.0));
        }
        let split = kernel_split(&t, 1e-9)?;
        kernel = kernel.max(split.d_on_ker).max(split.n_on_ker);
        match rationality_residual(&t, &held_out) {
            Ok(r) => rational = rational.max(r),
            Err(GeomError::PoleAt { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    let mut records = vec![
        Check::scalar("false_positives", "LA", false_pos as f64, 0.0, 0.5),
        Check::below("substitution_identity", "traza", subst, 1e-10),
        Check::below("ker_h_in_ker_d_and_n", "LA", kernel, 1e-8),
        Check::below("rational_degree_bound", "LA", rational, 1e-8),
    ];
    let zero = lemma_la_decision(&SymmetricTriple::zero(k), &grid, cfg.tol)?;
    records.push(Check::flag("zero_triple_phi_vanishes", "LA", zero.phi_identically_zero, true));
    let one = SymmetricTriple::new(
        Mat::from_diagonal(&Vector::from_vec(vec![1.0, 0.0])),
        Mat::zeros(2, 2),
    )?;
    records.push(Check::scalar("phi_diag10(0.5)", "LA", trace_rational(&one, 0.5)?, 2.0, 1e-10));
    let n3 = SymmetricTriple::new(Mat::zeros(3, 3), Mat::identity(3, 3))?;
    records.push(Check::scalar("phi_identity_n3(1)", "LA", trace_rational(&n3, 1.0)?, -1.5, 1e-10));
    let mut obs = Observations::new();
    obs.insert("k".into(), json!(k));
    obs.insert("nonzero_triples".into(), json!(nonzero));
    obs.insert("s_grid_points".into(), json!(grid.len()));
    Ok(Report::new(cfg, records, obs, start.elapsed()))
}

pub fn cmd_sol(cfg: &RunConfig) -> Result<Report, CliError> {
    let start = Instant::now();
    let point = [0.2, -0.4, 0.3];
    let records = sol_verification(point, cfg.tol)?;
    let mut obs = Observations::new();
    obs.insert("point".into(), json!(point));
    Ok(Report::new(cfg, records, obs, start.elapsed()))
}

fn num(params: &Params, key: &str, default: f64) -> Result<f64, CliError> {
    params.get(key).map_or(Ok(default), |s| {
        s.trim()
            .parse()
            .map_err(|_| CliError::Config(format!("function parameter {key}=`{s}` is not a number")))
    })
}

fn index(params: &Params, key: &str, m: usize) -> Result<usize, CliError> {
    let i = num(params, key, 0.0)?;
    if i < 0.0 || i.fract() != 0.0 || i as usize >= m {
        return Err(CliError::Config(format!("function index {key}={i} out of range for m={m}")));
    }
    Ok(i as usize)
}

/// Parses `linear:c=a;b`, `radial:k=1`, `square:i=0`, `coordinate:i=1` or
/// `constant:c=0.5`. Returns the field and, for `radial`, its center.
pub fn parse_function(selector: &str, m: usize) -> Result<(ScalarField, Option<Vec<f64>>), CliError> {
    let (name, params) = split_selector(selector)?;
    match name.as_str() {
        "linear" => {
            let coeffs = match params.get("c") {
                None => (0..m).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect(),
                Some(s) => s
                    .split(';')
                    .map(|t| t.trim().parse::<f64>())
                    .collect::<Result<Vec<f64>, _>>()
                    .map_err(|_| CliError::Config(format!("linear c=`{s}` is not a ;-separated list")))?,
            };
            if coeffs.len() != m {
                return Err(CliError::Config(format!("linear needs {m} coefficients")));
            }
            Ok((ScalarField::linear(coeffs, num(&params, "o", 0.0)?), None))
        }
        "radial" => {
            let center = vec![0.0; m];
            Ok((ScalarField::radial(center.clone(), num(&params, "k", 1.0)?), Some(center)))
        }
        "square" => Ok((ScalarField::square(index(&params, "i", m)?), None)),
        "coordinate" => Ok((ScalarField::coordinate(index(&params, "i", m)?), None)),
        "constant" => Ok((ScalarField::constant(num(&params, "c", 0.0)?), None)),
        other => Err(CliError::Config(format!(
            "unknown function `{other}` (linear|radial|square|coordinate|constant)"
        ))),
    }
}

pub fn cmd_project(cfg: &RunConfig) -> Result<Report, CliError> {
    let start = Instant::now();
    let mut base = load_chart(cfg, "flat")?;
    let (f, center) = parse_function(cfg.function.as_deref().unwrap_or("radial"), base.m())?;
    if let Some(c) = center {
        base.domain = base.domain.clone().excluding_ball(c, 0.3);
    }
    let graph = graph_immersion(&base, &f)?;
    let mut rng = rng_for(cfg);
    let mut obs = Observations::new();
    let mut records = Vec::new();
    obs.insert("graph".into(), json!(graph.name));

    let formulae = formulae_check(&graph, &mut rng, cfg.samples, cfg.tol)?;
    let eikonal = formulae.eikonal_spread < EIKONAL_TOL;
    obs.insert("graph_minimal".into(), json!(formulae.graph_minimal));
    obs.insert("conditions_hold".into(), json!(formulae.conditions_hold));
    obs.insert("eikonal".into(), json!(eikonal));
    obs.insert("gradient_norm_spread".into(), json!(formulae.eikonal_spread));

    let axis = Vector::from_fn(graph.n(), |i, _| if i + 1 == graph.n() { 1.0 } else { 0.0 });
    let helix = is_helix(&graph, &axis, &mut rng, cfg.samples, 1e-7)?;
    records.push(Check::flag("helix_iff_eikonal", "teor:eikonalvshelix", helix.is_helix, eikonal));

    if eikonal {
        records.push(Check::flag(
            "minimal_iff_conditions",
            "formulae",
            formulae.graph_minimal,
            formulae.conditions_hold,
        ));
        let metric = MetricChart::induced(&base);
        let points = base.samples(&mut rng, cfg.samples.min(20));
        records.extend(suite::worst_relations(&metric, &f, &points, "base", cfg.tol)?);
    } else {
        obs.insert(
            "skipped".into(),
            json!("minimality criterion and metric comparison need an eikonal function"),
        );
    }
    Ok(Report::new(cfg, records, obs, start.elapsed()))
}

pub fn cmd_suite(cfg: &RunConfig) -> Result<Report, CliError> {
    let start = Instant::now();
    let first = suite::run_criteria(cfg.seed)?;
    let second = suite::run_criteria(cfg.seed)?;
    let mut records = suite::flatten(&first);
    let a = serde_json::to_string(&records).expect("records serialize");
    let b = serde_json::to_string(&suite::flatten(&second)).expect("records serialize");
    records.push(Check::flag("AC9.identical_reruns", "artifact", a == b, true));
    let mut obs = Observations::new();
    for c in &first {
        obs.insert(format!("{} {}", c.id, c.title), json!(c.passed()));
    }
    obs.insert("AC9 determinism".into(), json!(a == b));
    Ok(Report::new(cfg, records, obs, start.elapsed()))
}
