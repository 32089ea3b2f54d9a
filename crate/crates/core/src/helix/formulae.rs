use serde::Serialize;

use crate::catalog::{builtin, graph_immersion, ImmersionChart, ScalarField};
use crate::error::{GeomError, Result};
use crate::extrinsic::{mean_curvature, second_fundamental_form};
use crate::intrinsic::{self, MetricChart};
use crate::numerics::{Rng, Vector};

/// Both sides of the minimality criterion for a graph over a base `B`:
/// the graph is minimal iff `Δ_B f = 0` and
/// `H_B = α_B(∇f, ∇f) / (1 + |∇f|^2)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FormulaeReport {
    pub samples: usize,
    pub max_graph_mean_curvature: f64,
    pub graph_minimal: bool,
    pub max_laplacian: f64,
    pub max_mean_curvature_residual: f64,
    pub conditions_hold: bool,
    /// Spread of `|∇_B f|`.
    pub eikonal_spread: f64,
    pub agree: bool,
}

pub fn formulae_check(
    graph: &ImmersionChart,
    rng: &mut Rng,
    samples: usize,
    tol: f64,
) -> Result<FormulaeReport> {
    let info = graph
        .graph
        .as_ref()
        .ok_or_else(|| GeomError::contract(format!("{} is not a graph chart", graph.name)))?;
    if samples == 0 {
        return Err(GeomError::param("samples", "need at least one sample"));
    }
    let base_metric = MetricChart::induced(&info.base);
    let (mut max_h, mut max_lap, mut max_res) = (0.0_f64, 0.0_f64, 0.0_f64);
    let mut norms = Vec::with_capacity(samples);
    for u in graph.samples(rng, samples) {
        max_h = max_h.max(mean_curvature(graph, &u)?.norm());
        max_lap = max_lap.max(intrinsic::laplacian(&base_metric, &info.f, &u)?.abs());

        let shape = second_fundamental_form(&info.base, &u)?;
        let grad = intrinsic::gradient(&base_metric, &info.f, &u)?;
        let ambient = &shape.frames.jet.jacobian * &grad;
        let norm2 = ambient.norm_squared();
        norms.push(norm2.sqrt());
        let x = Vector::from_fn(shape.frames.m(), |i, _| shape.frames.tangent[i].dot(&ambient));
        let rhs = shape.alpha_on(&x, &x) / (1.0 + norm2);
        max_res = max_res.max((&shape.mean_curvature - rhs).norm());
    }
    let spread = norms.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - norms.iter().copied().fold(f64::INFINITY, f64::min);
    let graph_minimal = max_h < tol;
    let conditions_hold = max_lap < tol && max_res < tol;
    Ok(FormulaeReport {
        samples,
        max_graph_mean_curvature: max_h,
        graph_minimal,
        max_laplacian: max_lap,
        max_mean_curvature_residual: max_res,
        conditions_hold,
        eikonal_spread: spread,
        agree: graph_minimal == conditions_hold,
    })
}

/// Graph charts over flat and curved bases, with eikonal and non-eikonal
/// functions. Harmonic non-eikonal functions on minimal bases are left out:
/// there the conditions can hold while the graph is not minimal.
pub fn formulae_corpus() -> Result<Vec<ImmersionChart>> {
    let flat = builtin::flat(2, 1.0)?;
    let paraboloid = ScalarField::new("u0^2+u1^2", |v| &v[0] * &v[0] + &v[1] * &v[1]);
    let sphere = builtin::round_sphere(1.0)?;
    let cyl = builtin::cylinder_over_curve(&builtin::circle(1.0, 2)?)?;
    let helicoid = builtin::helicoid(0.5)?;
    let catenoid = builtin::catenoid(1.0)?;
    let exp_sum = ScalarField::new("exp(u0)+u1", |v| v[0].exp() + &v[1]);
    Ok(vec![
        builtin::flat_graph("linear", 0.7)?,
        graph_immersion(&flat, &ScalarField::linear(vec![1.2, -0.5], 0.3))?,
        builtin::flat_graph("radial", 1.0)?,
        builtin::flat_graph("square", 1.0)?,
        graph_immersion(&flat, &paraboloid)?,
        graph_immersion(&flat, &exp_sum)?,
        graph_immersion(&catenoid, &ScalarField::constant(0.4))?,
        graph_immersion(&helicoid, &ScalarField::constant(-1.0))?,
        graph_immersion(&helicoid, &ScalarField::coordinate(1))?,
        graph_immersion(&cyl, &ScalarField::coordinate(0))?,
        graph_immersion(&cyl, &ScalarField::coordinate(1))?,
        graph_immersion(&sphere, &ScalarField::constant(0.0))?,
        graph_immersion(&sphere, &ScalarField::coordinate(0))?,
        graph_immersion(&catenoid, &ScalarField::square(1))?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin;
    use crate::numerics::Tolerances;

    #[test]
    fn linear_graph_is_minimal_both_ways() {
        let g = builtin::flat_graph("linear", 0.7).unwrap();
        let mut rng = Tolerances::default().rng();
        let r = formulae_check(&g, &mut rng, 20, 1e-9).unwrap();
        assert!(r.graph_minimal && r.conditions_hold && r.agree);
    }

    #[test]
    fn cone_graph_fails_both_ways() {
        let g = builtin::flat_graph("radial", 1.0).unwrap();
        let mut rng = Tolerances::default().rng();
        let r = formulae_check(&g, &mut rng, 20, 1e-6).unwrap();
        assert!(!r.graph_minimal && !r.conditions_hold && r.agree);
        assert!(r.eikonal_spread < 1e-12);
    }

    #[test]
    fn scherk_graph_is_minimal_but_not_eikonal() {
        let f = ScalarField::new("scherk", |v| v[1].cos().ln() - v[0].cos().ln());
        let g = graph_immersion(&builtin::flat(2, 1.0).unwrap(), &f).unwrap();
        let mut rng = Tolerances::default().rng();
        let r = formulae_check(&g, &mut rng, 20, 1e-6).unwrap();
        assert!(r.graph_minimal && !r.conditions_hold);
        assert!(r.eikonal_spread > 0.1);
    }

    #[test]
    fn non_graph_rejected() {
        let ch = builtin::catenoid(1.0).unwrap();
        let mut rng = Tolerances::default().rng();
        assert!(formulae_check(&ch, &mut rng, 5, 1e-6).is_err());
    }
}
