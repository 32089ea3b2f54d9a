//! Helix analysis relative to a fixed direction `d`: the angle `θ` between
//! `d` and the tangent spaces, the unit field `T = d^T / |d^T|`, and the
//! identities it satisfies on helices.

mod complex;
pub mod flow;
mod formulae;
mod harness;

use serde::Serialize;

use crate::catalog::{ImmersionChart, ScalarField};
use crate::error::{GeomError, Result};
use crate::extrinsic::{frames, shape_from_frames, FramePack, ShapePack};
use crate::intrinsic::{self, MetricChart};
use crate::numerics::{Mat, Rng, Vector};

pub use complex::{complex_helix_checks, ComplexReport};
pub use formulae::{formulae_check, formulae_corpus, FormulaeReport};
pub use harness::{
    main_theorem_corpus, main_theorem_harness, HarnessCase, HarnessOutcome, FULLNESS_CUTOFF,
    FULLNESS_SAMPLES,
};

/// Below this `|d^T|` the direction counts as normal and `T` is undefined.
pub const VERTICAL_TOL: f64 = 1e-9;
/// Arc length followed by ruledness probes.
pub const RULED_ARC: f64 = 0.5;
pub const RULED_STEPS: usize = 40;

pub(crate) fn unit(d: &Vector) -> Result<Vector> {
    let n = d.norm();
    if !(n > 0.0) || !n.is_finite() {
        return Err(GeomError::param("direction", "must be a nonzero finite vector"));
    }
    Ok(d / n)
}

fn check_dim(chart: &ImmersionChart, d: &Vector) -> Result<()> {
    if d.len() != chart.n() {
        return Err(GeomError::DimensionMismatch(format!(
            "direction has {} components, chart lives in R^{}",
            d.len(),
            chart.n()
        )));
    }
    Ok(())
}

/// `θ = atan2(|d^⊥|, |d^T|)`, which equals `arccos |d^T|` for unit `d`
/// without losing accuracy near `θ = 0`.
pub(crate) fn angle_from(fr: &FramePack, d: &Vector) -> f64 {
    let dt = fr.tangent_part(d);
    (d - &dt).norm().atan2(dt.norm())
}

/// `θ = arccos |d^T|` with `d` normalised.
pub fn helix_angle(chart: &ImmersionChart, u: &[f64], d: &Vector) -> Result<f64> {
    check_dim(chart, d)?;
    let d = unit(d)?;
    let fr = frames(chart, u)?;
    Ok(angle_from(&fr, &d))
}

pub(crate) fn t_from_frames(fr: &FramePack, d: &Vector) -> Result<Vector> {
    let dt = fr.tangent_part(d);
    let norm = dt.norm();
    if norm < VERTICAL_TOL {
        return Err(GeomError::VerticalDirection { tangent_norm: norm });
    }
    Ok(dt / norm)
}

pub fn tangential_t(chart: &ImmersionChart, u: &[f64], d: &Vector) -> Result<Vector> {
    check_dim(chart, d)?;
    t_from_frames(&frames(chart, u)?, &unit(d)?)
}

/// `T` and its chart partials `d_a T` (ambient vectors), from the second
/// jet via `d_a (P d) = (d_a P) d` with `P = J G^{-1} J^T`.
pub(crate) fn t_with_partials(fr: &FramePack, d: &Vector) -> Result<(Vector, Vec<Vector>)> {
    let j = &fr.jet.jacobian;
    let gi = &fr.metric_inv;
    let m = fr.m();
    let v = fr.tangent_part(d);
    let norm = v.norm();
    if norm < VERTICAL_TOL {
        return Err(GeomError::VerticalDirection { tangent_norm: norm });
    }
    let jtd = j.transpose() * d;
    let partials = (0..m)
        .map(|a| {
            let ha = Mat::from_fn(fr.n(), m, |r, b| fr.jet.hessians[r][(a, b)]);
            let dgi = -(gi * (ha.transpose() * j + j.transpose() * &ha) * gi);
            let dv = &ha * (gi * &jtd) + j * (&dgi * &jtd) + j * (gi * (ha.transpose() * d));
            &dv / norm - &v * (v.dot(&dv) / norm.powi(3))
        })
        .collect();
    Ok((v / norm, partials))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HelixReport {
    /// Unit direction.
    pub direction: Vec<f64>,
    pub angle_samples: Vec<f64>,
    pub angle_mean: f64,
    pub angle_spread: f64,
    /// Spread of `|∇_M h_d|` computed intrinsically.
    pub eikonal_residual: f64,
    /// `None` when the chart is not a helix or `T` is undefined.
    pub ruled_residual: Option<f64>,
    /// Spread of `<N, d>`; hypersurfaces only.
    pub gauss_residual: Option<f64>,
    /// Spread of `|∇_B f|` on the base of a graph chart with `d` the graph
    /// axis.
    pub base_gradient_spread: Option<f64>,
    pub is_helix: bool,
    pub is_ruled: Option<bool>,
    pub is_cylinder: bool,
    /// `false` when `θ = π/2`, in which case `T`-dependent checks are skipped.
    pub t_defined: bool,
}

fn spread(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn is_helix(
    chart: &ImmersionChart,
    d: &Vector,
    rng: &mut Rng,
    samples: usize,
    tol: f64,
) -> Result<HelixReport> {
    check_dim(chart, d)?;
    if samples == 0 {
        return Err(GeomError::param("samples", "need at least one sample"));
    }
    let d = unit(d)?;
    let induced = MetricChart::induced(chart);
    let height = height_function(chart, &d);
    let hypersurface = chart.codim() == 1;
    let mut angles = Vec::with_capacity(samples);
    let mut grad_norms = Vec::with_capacity(samples);
    let mut normal_dots = Vec::new();
    let points = chart.samples(rng, samples);
    for u in &points {
        let fr = frames(chart, u)?;
        angles.push(angle_from(&fr, &d));
        let grad = intrinsic::gradient(&induced, &height, u)?;
        let g = induced.g(u);
        grad_norms.push((grad.transpose() * g * &grad)[(0, 0)].max(0.0).sqrt());
        if hypersurface {
            normal_dots.push(fr.normal[0].dot(&d));
        }
    }
    let angle_mean = mean(&angles);
    let angle_spread = spread(&angles);
    let is_helix = angle_spread < tol;
    let t_defined = angle_mean.cos() > VERTICAL_TOL.max(tol);
    let (ruled_residual, is_ruled) = if is_helix && t_defined {
        let rep = is_ruled(chart, &d, rng, samples.min(5), RULED_STEPS, tol)?;
        (Some(rep.residual), Some(rep.is_ruled))
    } else {
        (None, None)
    };
    let base_gradient_spread = match &chart.graph {
        Some(info) if (d[chart.n() - 1] - 1.0).abs() < 1e-12 => {
            let base_metric = MetricChart::induced(&info.base);
            let mut norms = Vec::with_capacity(points.len());
            for u in &points {
                let grad = intrinsic::gradient(&base_metric, &info.f, u)?;
                let g = base_metric.g(u);
                norms.push((grad.transpose() * g * &grad)[(0, 0)].max(0.0).sqrt());
            }
            Some(spread(&norms))
        }
        _ => None,
    };
    Ok(HelixReport {
        direction: d.iter().copied().collect(),
        angle_samples: angles,
        angle_mean,
        angle_spread,
        eikonal_residual: spread(&grad_norms),
        ruled_residual,
        gauss_residual: hypersurface.then(|| spread(&normal_dots)),
        base_gradient_spread,
        is_helix,
        is_ruled,
        is_cylinder: is_helix && angle_mean < tol,
        t_defined,
    })
}

/// Height function `u -> <phi(u), d>`.
pub fn height_function(chart: &ImmersionChart, d: &Vector) -> ScalarField {
    let map = chart.map.clone();
    let d = d.clone();
    ScalarField::new(format!("<{}, d>", chart.name), move |v| {
        map.apply(v)
            .into_iter()
            .zip(d.iter())
            .fold(crate::numerics::Dual3::constant(0.0), |acc, (x, c)| acc + x * *c)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuledReport {
    pub residual: f64,
    pub truncated: bool,
    pub is_ruled: bool,
}

/// Follows `T`-integral curves for arc length [`RULED_ARC`] from seeded
/// starts and measures their distance from straight lines.
pub fn is_ruled(
    chart: &ImmersionChart,
    d: &Vector,
    rng: &mut Rng,
    samples: usize,
    steps: usize,
    tol: f64,
) -> Result<RuledReport> {
    check_dim(chart, d)?;
    if samples == 0 || steps == 0 {
        return Err(GeomError::param("samples", "need at least one start and one step"));
    }
    let d = unit(d)?;
    let mut residual = 0.0_f64;
    let mut truncated = false;
    for u in chart.samples(rng, samples) {
        let t0 = tangential_t(chart, &u, &d)?;
        let trace = flow::integrate(chart, |fr| t_from_frames(fr, &d), &u, RULED_ARC, steps)?;
        truncated |= trace.truncated;
        residual = residual.max(flow::line_deviation(&trace.points, &t0));
    }
    Ok(RuledReport {
        residual,
        truncated,
        is_ruled: residual < tol,
    })
}

fn xi_and_tan(fr: &FramePack, d: &Vector) -> (Vector, f64, f64) {
    let dt = fr.tangent_part(d);
    let dn = d - &dt;
    let (c, s) = (dt.norm(), dn.norm());
    let xi = if s > 0.0 { &dn / s } else { dn.clone() };
    (xi, c, s)
}

/// `max_i |∇_{E_i} T - tan θ A^ξ E_i|` with `ξ = d^⊥ / |d^⊥|`.
pub fn structure_equation_residual(chart: &ImmersionChart, d: &Vector, u: &[f64]) -> Result<f64> {
    check_dim(chart, d)?;
    let d = unit(d)?;
    let shape = shape_from_frames(frames(chart, u)?)?;
    structure_residual_from(&shape, &d)
}

pub(crate) fn structure_residual_from(shape: &ShapePack, d: &Vector) -> Result<f64> {
    let fr = &shape.frames;
    let (xi, cos, sin) = xi_and_tan(fr, d);
    if cos < VERTICAL_TOL {
        return Err(GeomError::VerticalDirection { tangent_norm: cos });
    }
    if sin < VERTICAL_TOL {
        return Ok(0.0);
    }
    let (_, dt) = t_with_partials(fr, d)?;
    let a_xi = shape.shape_operator_along(&xi);
    let tan = sin / cos;
    let mut worst = 0.0_f64;
    for i in 0..fr.m() {
        let d_ei_t = (0..fr.m()).fold(Vector::zeros(fr.n()), |acc, a| {
            acc + &dt[a] * fr.coeffs[(a, i)]
        });
        let lhs = fr.tangent_part(&d_ei_t);
        let rhs = (0..fr.m()).fold(Vector::zeros(fr.n()), |acc, j| {
            acc + &fr.tangent[j] * (tan * a_xi[(j, i)])
        });
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LaplacianHeight {
    /// `Δ_M h_d` from the intrinsic Laplacian of the induced metric.
    pub lhs: f64,
    /// `<H, d>`.
    pub rhs1: f64,
    /// `sin θ <H, ξ>`.
    pub rhs2: f64,
}

pub fn laplacian_height_check(
    chart: &ImmersionChart,
    d: &Vector,
    u: &[f64],
) -> Result<LaplacianHeight> {
    check_dim(chart, d)?;
    let d = unit(d)?;
    let induced = MetricChart::induced(chart);
    let lhs = intrinsic::laplacian(&induced, &height_function(chart, &d), u)?;
    let shape = shape_from_frames(frames(chart, u)?)?;
    let (xi, _, sin) = xi_and_tan(&shape.frames, &d);
    Ok(LaplacianHeight {
        lhs,
        rhs1: shape.mean_curvature.dot(&d),
        rhs2: sin * shape.mean_curvature.dot(&xi),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussImage {
    pub mean: f64,
    pub spread: f64,
}

/// Spread of `<N, d>` for the oriented unit normal of a hypersurface.
pub fn gauss_image_check(
    chart: &ImmersionChart,
    d: &Vector,
    rng: &mut Rng,
    samples: usize,
) -> Result<GaussImage> {
    check_dim(chart, d)?;
    if chart.codim() != 1 {
        return Err(GeomError::NotHypersurface {
            m: chart.m(),
            n: chart.n(),
        });
    }
    if samples == 0 {
        return Err(GeomError::param("samples", "need at least one sample"));
    }
    let d = unit(d)?;
    let mut dots = Vec::with_capacity(samples);
    for u in chart.samples(rng, samples) {
        dots.push(frames(chart, &u)?.normal[0].dot(&d));
    }
    Ok(GaussImage {
        mean: mean(&dots),
        spread: spread(&dots),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RicciT {
    /// Intrinsic `Ric_M(T, T)`.
    pub ricci_tt: f64,
    /// `|A^N T|`.
    pub shape_t_norm: f64,
    /// `T` lies in the relative nullity within `1e-6`.
    pub applicable: bool,
}

pub fn ricci_t_check(chart: &ImmersionChart, d: &Vector, u: &[f64]) -> Result<RicciT> {
    check_dim(chart, d)?;
    if chart.codim() != 1 {
        return Err(GeomError::NotHypersurface {
            m: chart.m(),
            n: chart.n(),
        });
    }
    let d = unit(d)?;
    let shape = shape_from_frames(frames(chart, u)?)?;
    let fr = &shape.frames;
    let t = t_from_frames(fr, &d)?;
    let t_frame = Vector::from_fn(fr.m(), |i, _| fr.tangent[i].dot(&t));
    let shape_t_norm = (&shape.shape_ops[0] * t_frame).norm();
    let pack = intrinsic::riemann(&MetricChart::induced(chart), u)?;
    let ricci_tt = pack.ricci_on(&fr.coords_of(&t));
    Ok(RicciT {
        ricci_tt,
        shape_t_norm,
        applicable: shape_t_norm < 1e-6,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin;
    use crate::numerics::Tolerances;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6};

    fn e(n: usize, i: usize) -> Vector {
        Vector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 })
    }

    #[test]
    fn tilted_plane_angle_and_t() {
        let ch = builtin::tilted_plane(FRAC_PI_6).unwrap();
        let th = helix_angle(&ch, &[0.3, 0.1], &e(3, 2)).unwrap();
        assert!((th - FRAC_PI_6).abs() < 1e-14);
        let t = tangential_t(&builtin::tilted_plane(FRAC_PI_4).unwrap(), &[0.0, 0.0], &e(3, 2))
            .unwrap();
        let expected = Vector::from_vec(vec![FRAC_PI_4.sin(), 0.0, FRAC_PI_4.cos()]);
        assert!((t - expected).norm() < 1e-14);
    }

    #[test]
    fn cone_angle_is_quarter_turn() {
        let ch = builtin::cone(1.0, 0.1).unwrap();
        let mut rng = Tolerances::default().rng();
        let rep = is_helix(&ch, &e(3, 2), &mut rng, 30, 1e-7).unwrap();
        assert!(rep.is_helix && !rep.is_cylinder);
        assert!((rep.angle_mean - FRAC_PI_4).abs() < 1e-12);
        assert!(rep.eikonal_residual < 1e-10);
        assert!(rep.gauss_residual.unwrap() < 1e-10);
        assert!(rep.is_ruled == Some(true), "{:?}", rep.ruled_residual);
        let t = tangential_t(&ch, &[1.0, 0.0], &e(3, 2)).unwrap();
        assert!((t[2] - FRAC_PI_4.cos()).abs() < 1e-12);
    }

    #[test]
    fn vertical_direction_is_reported() {
        let ch = builtin::tilted_plane(0.0).unwrap();
        let normal = e(3, 0);
        assert!(matches!(
            tangential_t(&ch, &[0.0, 0.0], &normal),
            Err(GeomError::VerticalDirection { .. })
        ));
        let mut rng = Tolerances::default().rng();
        let rep = is_helix(&ch, &normal, &mut rng, 5, 1e-9).unwrap();
        assert!(rep.is_helix && !rep.t_defined && rep.is_ruled.is_none());
    }

    #[test]
    fn catenoid_is_not_a_helix_about_its_axis() {
        let ch = builtin::catenoid(1.0).unwrap();
        let mut rng = Tolerances::default().rng();
        let rep = is_helix(&ch, &e(3, 2), &mut rng, 30, 1e-7).unwrap();
        assert!(!rep.is_helix);
        assert!(rep.gauss_residual.unwrap() > 0.1);
    }

    #[test]
    fn structure_equation_on_cone() {
        let ch = builtin::cone(1.0, 0.1).unwrap();
        let mut rng = Tolerances::default().rng();
        for u in ch.samples(&mut rng, 20) {
            let r = structure_equation_residual(&ch, &e(3, 2), &u).unwrap();
            assert!(r < 1e-12, "{r} at {u:?}");
        }
    }

    #[test]
    fn structure_equation_fails_off_helices() {
        let ch = builtin::flat_graph("square", 1.0).unwrap();
        let r = structure_equation_residual(&ch, &e(3, 2), &[0.5, 0.2]).unwrap();
        assert!(r > 1e-2, "{r}");
    }

    #[test]
    fn laplacian_of_height_on_cone() {
        let ch = builtin::cone(1.0, 0.1).unwrap();
        let l = laplacian_height_check(&ch, &e(3, 2), &[0.8, -0.6]).unwrap();
        assert!(l.lhs.abs() > 0.1);
        assert!((l.lhs - l.rhs1).abs() < 1e-12);
        assert!((l.lhs - l.rhs2).abs() < 1e-12);
    }

    #[test]
    fn forced_ruled_run_on_sphere_fails() {
        let ch = builtin::round_sphere(1.0).unwrap();
        let mut rng = Tolerances::default().rng();
        let rep = is_ruled(&ch, &e(3, 2), &mut rng, 3, 40, 1e-8).unwrap();
        assert!(rep.residual > 1e-3 && !rep.is_ruled);
    }

    #[test]
    fn ricci_along_t() {
        let cone = builtin::cone(1.0, 0.1).unwrap();
        let r = ricci_t_check(&cone, &e(3, 2), &[0.7, 0.9]).unwrap();
        assert!(r.ricci_tt.abs() < 1e-10 && r.shape_t_norm < 1e-10 && r.applicable);
        let sphere = builtin::round_sphere(1.0).unwrap();
        let r = ricci_t_check(&sphere, &e(3, 2), &[1.0, 0.4]).unwrap();
        assert!((r.shape_t_norm - 1.0).abs() < 1e-10 && !r.applicable);
    }
}
