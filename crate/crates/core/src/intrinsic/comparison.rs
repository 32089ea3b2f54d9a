use serde::Serialize;

use crate::catalog::ScalarField;
use crate::check::Check;
use crate::error::{GeomError, Result};
use crate::intrinsic::curvature::{
    christoffels_from, curvature_from, gradient_from, hessian_from, laplacian_from,
};
use crate::intrinsic::{MetricChart, MetricJet};
use crate::numerics::{det, Mat, Rng, Vector};

/// Largest gradient-norm variation accepted as eikonal.
pub const EIKONAL_TOL: f64 = 1e-6;

/// `h = g + df ⊗ df`, with exact partials up to second order (needs the
/// third jet of `f`).
pub fn helix_metric(g: &MetricChart, f: &ScalarField) -> MetricChart {
    let inner = g.clone();
    let f = f.clone();
    MetricChart::from_jet_fn(
        format!("{} + d{} ⊗ d{}", g.name, f.name, f.name),
        g.domain.clone(),
        move |u| {
            let base = inner.jet(u);
            let fj = f.jet(u, 3);
            let m = base.m();
            let p = &fj.grad;
            let q = &fj.hess;
            let g = &base.g + p * p.transpose();
            let dg = (0..m)
                .map(|c| {
                    &base.dg[c] + Mat::from_fn(m, m, |a, b| q[(a, c)] * p[b] + p[a] * q[(b, c)])
                })
                .collect();
            let ddg = (0..m)
                .map(|c| {
                    (0..m)
                        .map(|d| {
                            &base.ddg[c][d]
                                + Mat::from_fn(m, m, |a, b| {
                                    fj.third(a, c, d) * p[b]
                                        + q[(a, c)] * q[(b, d)]
                                        + q[(a, d)] * q[(b, c)]
                                        + p[a] * fj.third(b, c, d)
                                })
                        })
                        .collect()
                })
                .collect();
            MetricJet { g, dg, ddg }
        },
    )
}

/// Exact gradient of `|∇f|_g^2` in coordinates; zero iff `f` is locally
/// eikonal to first order.
pub fn eikonal_gradient(g: &MetricChart, f: &ScalarField, u: &[f64]) -> Result<Vector> {
    let jet = g.validate_at(u)?;
    let ch = christoffels_from(&jet)?;
    let fj = f.jet(u, 2);
    Ok(eikonal_gradient_from(&jet, &ch.g_inv, &fj.grad, &fj.hess))
}

fn eikonal_gradient_from(jet: &MetricJet, g_inv: &Mat, p: &Vector, q: &Mat) -> Vector {
    let grad = g_inv * p;
    Vector::from_fn(jet.m(), |c, _| {
        let d_inv = -(g_inv * &jet.dg[c] * g_inv);
        2.0 * q.column(c).dot(&grad) + (p.transpose() * d_inv * p)[(0, 0)]
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EikonalReport {
    pub norm_mean: f64,
    /// `max - min` of `|∇f|_g` over the samples.
    pub spread: f64,
    pub is_eikonal: bool,
}

pub fn eikonal_check(
    g: &MetricChart,
    f: &ScalarField,
    rng: &mut Rng,
    samples: usize,
    tol: f64,
) -> Result<EikonalReport> {
    if samples == 0 {
        return Err(GeomError::param("samples", "need at least one sample"));
    }
    let mut norms = Vec::with_capacity(samples);
    for u in g.domain.samples(rng, samples) {
        let jet = g.validate_at(&u)?;
        let ch = christoffels_from(&jet)?;
        let grad = gradient_from(&ch, &f.jet(&u, 1));
        norms.push((grad.transpose() * &jet.g * &grad)[(0, 0)].sqrt());
    }
    let max = norms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = norms.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = max - min;
    Ok(EikonalReport {
        norm_mean: norms.iter().sum::<f64>() / samples as f64,
        spread,
        is_eikonal: spread < tol,
    })
}

fn require_eikonal(jet: &MetricJet, g_inv: &Mat, p: &Vector, q: &Mat) -> Result<()> {
    let spread = eikonal_gradient_from(jet, g_inv, p, q).amax();
    if spread >= EIKONAL_TOL {
        return Err(GeomError::NotEikonal { spread });
    }
    Ok(())
}

/// The six relations between `(B, g)` and `(B, h)` at one point, each as
/// a check with the `h` side computed directly from the `h` metric chart.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    /// `1 + |∇_g f|^2`.
    pub w: f64,
    pub relations: Vec<Check>,
}

impl ComparisonReport {
    pub fn max_residual(&self) -> f64 {
        self.relations.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.relations.iter().find(|c| c.name == name)
    }
}

pub fn comparison_report(
    g: &MetricChart,
    f: &ScalarField,
    u: &[f64],
    tol: f64,
) -> Result<ComparisonReport> {
    let gj = g.validate_at(u)?;
    let fj = f.jet(u, 3);
    let cg = curvature_from(&gj)?;
    require_eikonal(&gj, &cg.christoffels.g_inv, &fj.grad, &fj.hess)?;
    let h = helix_metric(g, f);
    let hj = h.validate_at(u)?;
    let chh = curvature_from(&hj)?;
    let (chg, chh_c) = (&cg.christoffels, &chh.christoffels);
    let m = gj.m();

    let grad_g = gradient_from(chg, &fj);
    let w = 1.0 + fj.grad.dot(&grad_g);
    let mut out = Vec::with_capacity(6);

    let vol_h = det(&hj.g).sqrt();
    let vol_g = w.sqrt() * det(&gj.g).sqrt();
    out.push(Check::scalar("volume_form", "prop:volume-forms", vol_h, vol_g, tol));

    let grad_h = gradient_from(chh_c, &fj);
    let grad_rhs = &grad_g / w;
    out.push(Check::norms(
        "gradient",
        "eqn:gradientes",
        grad_h.norm(),
        grad_rhs.norm(),
        (&grad_h - &grad_rhs).norm(),
        tol,
    ));

    let hess_g = hessian_from(chg, &fj);
    let mut conn_res = 0.0_f64;
    let (mut conn_l, mut conn_r) = (0.0, 0.0);
    for k in 0..m {
        let rhs = &chg.gamma[k] + &hess_g * (grad_g[k] / w);
        conn_res = conn_res.max((&chh_c.gamma[k] - &rhs).amax());
        conn_l += chh_c.gamma[k].norm_squared();
        conn_r += rhs.norm_squared();
    }
    out.push(Check::norms(
        "connection",
        "eqn:conexiones",
        conn_l.sqrt(),
        conn_r.sqrt(),
        conn_res,
        tol,
    ));

    let hess_h = hessian_from(chh_c, &fj);
    let hess_rhs = &hess_g / w;
    out.push(Check::norms(
        "hessian",
        "eqn:formula-hessianos",
        hess_h.norm(),
        hess_rhs.norm(),
        (&hess_h - &hess_rhs).amax(),
        tol,
    ));

    let lap_h = laplacian_from(chh_c, &fj);
    let lap_g = laplacian_from(chg, &fj);
    out.push(Check::scalar("laplacian", "coro:laplacian", lap_h, lap_g / w, tol));

    let ric_h = chh.ricci_on(&grad_h);
    let ric_g = cg.ricci_on(&grad_g);
    out.push(Check::scalar(
        "ricci_gradient",
        "eqn:ricci-relation",
        ric_h,
        ric_g / (w * w),
        tol,
    ));

    Ok(ComparisonReport { w, relations: out })
}

/// `Ric_g(∇_g f, ∇_g f)` for an eikonal `f`.
pub fn ricci_gradient_check(g: &MetricChart, f: &ScalarField, u: &[f64]) -> Result<f64> {
    let gj = g.validate_at(u)?;
    let fj = f.jet(u, 2);
    let pack = curvature_from(&gj)?;
    require_eikonal(&gj, &pack.christoffels.g_inv, &fj.grad, &fj.hess)?;
    Ok(pack.ricci_on(&gradient_from(&pack.christoffels, &fj)))
}

/// In a `g`-orthonormal frame with `E_1 = ∇_g f / |∇_g f|`, the matrix of
/// `h` should be `diag(1 + |∇_g f|^2, 1, ..., 1)`. Returns the largest
/// entry of the difference.
pub fn frame_form_residual(g: &MetricChart, f: &ScalarField, u: &[f64]) -> Result<f64> {
    let gj = g.validate_at(u)?;
    let ch = christoffels_from(&gj)?;
    let fj = f.jet(u, 1);
    let grad = gradient_from(&ch, &fj);
    let gm = &gj.g;
    let inner = |a: &Vector, b: &Vector| (a.transpose() * gm * b)[(0, 0)];
    let norm2 = inner(&grad, &grad);
    if norm2 <= 0.0 {
        return Err(GeomError::contract("gradient vanishes; frame undefined"));
    }
    let m = gj.m();
    let mut frame: Vec<Vector> = vec![&grad / norm2.sqrt()];
    for i in 0..m {
        let mut v = Vector::from_fn(m, |r, _| if r == i { 1.0 } else { 0.0 });
        for e in &frame {
            v -= e * inner(e, &v);
        }
        let nv = inner(&v, &v).sqrt();
        if nv > 1e-8 && frame.len() < m {
            frame.push(v / nv);
        }
    }
    let e = crate::numerics::columns(&frame, m);
    let h = gm + &fj.grad * fj.grad.transpose();
    let mut expected = Mat::identity(m, m);
    expected[(0, 0)] = 1.0 + norm2;
    Ok((e.transpose() * h * &e - expected).amax())
}

/// `|Hess_g f(∇_g f, ·)|`, zero for eikonal `f`.
pub fn hessian_along_gradient(g: &MetricChart, f: &ScalarField, u: &[f64]) -> Result<f64> {
    let gj = g.validate_at(u)?;
    let ch = christoffels_from(&gj)?;
    let fj = f.jet(u, 2);
    Ok((hessian_from(&ch, &fj) * gradient_from(&ch, &fj)).amax())
}
