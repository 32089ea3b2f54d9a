//! Integral curves of tangent vector fields, pushed to the ambient space.

use crate::catalog::ImmersionChart;
use crate::error::Result;
use crate::extrinsic::{frames, FramePack};
use crate::numerics::Vector;

/// Samples of an integral curve in chart and ambient coordinates.
#[derive(Debug, Clone)]
pub struct FlowTrace {
    pub params: Vec<Vec<f64>>,
    pub points: Vec<Vector>,
    /// Integration stopped early because the curve left the domain.
    pub truncated: bool,
}

fn chart_velocity<F>(chart: &ImmersionChart, field: &F, u: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(&FramePack) -> Result<Vector>,
{
    let fr = frames(chart, u)?;
    let v = field(&fr)?;
    Ok(fr.coords_of(&v).iter().copied().collect())
}

fn axpy(u: &[f64], h: f64, k: &[f64]) -> Vec<f64> {
    u.iter().zip(k).map(|(a, b)| a + h * b).collect()
}

/// Classical RK4 for `u' = coords(V(u))` over parameter length `length`
/// in `steps` fixed steps. Stops when a stage point leaves the domain.
pub fn integrate<F>(
    chart: &ImmersionChart,
    field: F,
    u0: &[f64],
    length: f64,
    steps: usize,
) -> Result<FlowTrace>
where
    F: Fn(&FramePack) -> Result<Vector>,
{
    let h = length / steps as f64;
    let mut u = u0.to_vec();
    let mut trace = FlowTrace {
        params: vec![u.clone()],
        points: vec![chart.point(&u)],
        truncated: false,
    };
    for _ in 0..steps {
        let inside = |p: &[f64]| chart.domain.contains(p, 0.0);
        let k1 = chart_velocity(chart, &field, &u)?;
        let p2 = axpy(&u, 0.5 * h, &k1);
        if !inside(&p2) {
            trace.truncated = true;
            break;
        }
        let k2 = chart_velocity(chart, &field, &p2)?;
        let p3 = axpy(&u, 0.5 * h, &k2);
        if !inside(&p3) {
            trace.truncated = true;
            break;
        }
        let k3 = chart_velocity(chart, &field, &p3)?;
        let p4 = axpy(&u, h, &k3);
        if !inside(&p4) {
            trace.truncated = true;
            break;
        }
        let k4 = chart_velocity(chart, &field, &p4)?;
        let next: Vec<f64> = (0..u.len())
            .map(|i| u[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
            .collect();
        if !inside(&next) {
            trace.truncated = true;
            break;
        }
        u = next;
        trace.points.push(chart.point(&u));
        trace.params.push(u.clone());
    }
    Ok(trace)
}

/// Largest distance of the traced points from the line through the first
/// point with unit direction `dir`.
pub fn line_deviation(points: &[Vector], dir: &Vector) -> f64 {
    let Some(p0) = points.first() else {
        return 0.0;
    };
    points
        .iter()
        .map(|p| {
            let w = p - p0;
            (&w - dir * dir.dot(&w)).norm()
        })
        .fold(0.0, f64::max)
}
