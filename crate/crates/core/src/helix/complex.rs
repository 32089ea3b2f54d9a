use serde::Serialize;

use crate::catalog::builtin::complex_j;
use crate::catalog::ImmersionChart;
use crate::error::{GeomError, Result};
use crate::extrinsic::frames;
use crate::helix::flow::{integrate, line_deviation};
use crate::helix::{check_dim, t_from_frames, tangential_t, unit};
use crate::numerics::Vector;

/// Flow time used for the bracket commutator.
const BRACKET_EPS: f64 = 1e-3;
const JT_ARC: f64 = 0.25;
const FLOW_STEPS: usize = 40;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexReport {
    /// Largest normal component of `J E_i`.
    pub j_invariance_residual: f64,
    /// Distance of the `JT` integral curve from a straight line.
    pub jt_geodesic_residual: f64,
    /// `|[T, JT]|` from the flow commutator.
    pub bracket_residual: f64,
}

pub fn complex_helix_checks(
    chart: &ImmersionChart,
    d: &Vector,
    u: &[f64],
    tol: f64,
) -> Result<ComplexReport> {
    check_dim(chart, d)?;
    if chart.n() % 2 != 0 {
        return Err(GeomError::DimensionMismatch(format!(
            "complex checks need even ambient dimension, got {}",
            chart.n()
        )));
    }
    let d = unit(d)?;
    let fr = frames(chart, u)?;
    let j_invariance_residual = fr
        .tangent
        .iter()
        .map(|e| fr.normal_part(&complex_j(e)).norm())
        .fold(0.0, f64::max);
    if j_invariance_residual > tol {
        return Err(GeomError::NonComplexSubmanifold {
            residual: j_invariance_residual,
        });
    }
    let t_field = |f: &crate::extrinsic::FramePack| t_from_frames(f, &d);
    let jt_field = |f: &crate::extrinsic::FramePack| {
        let t = t_from_frames(f, &d)?;
        Ok(f.tangent_part(&complex_j(&t)))
    };
    let jt0 = complex_j(&tangential_t(chart, u, &d)?);
    let trace = integrate(chart, jt_field, u, JT_ARC, FLOW_STEPS)?;
    let jt_geodesic_residual = line_deviation(&trace.points, &jt0);

    let end = |tr: crate::helix::flow::FlowTrace| -> Result<Vec<f64>> {
        if tr.truncated {
            return Err(GeomError::Evaluation("bracket flow left the domain".into()));
        }
        Ok(tr.params.last().cloned().unwrap_or_default())
    };
    let a1 = end(integrate(chart, t_field, u, BRACKET_EPS, 4)?)?;
    let a2 = end(integrate(chart, jt_field, &a1, BRACKET_EPS, 4)?)?;
    let b1 = end(integrate(chart, jt_field, u, BRACKET_EPS, 4)?)?;
    let b2 = end(integrate(chart, t_field, &b1, BRACKET_EPS, 4)?)?;
    let bracket_residual = (chart.point(&a2) - chart.point(&b2)).norm() / BRACKET_EPS.powi(2);
    Ok(ComplexReport {
        j_invariance_residual,
        jt_geodesic_residual,
        bracket_residual,
    })
}
