//! Falsification harness for the classification of minimal ruled helices:
//! every such helix with `θ > 0` should lie in a proper affine subspace,
//! and those with `θ = 0` should be cylinders.

use rand::Rng as _;
use serde::Serialize;

use crate::catalog::{builtin, ImmersionChart};
use crate::error::Result;
use crate::extrinsic::minimality_report;
use crate::helix::is_helix;
use crate::numerics::{affine_rank, random_rotation, Rng, Vector};

pub const FULLNESS_SAMPLES: usize = 500;
pub const FULLNESS_CUTOFF: f64 = 1e-8;
const HELIX_SAMPLES: usize = 40;
const ANGLE_TOL: f64 = 1e-7;
const MINIMAL_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct HarnessCase {
    pub name: String,
    pub chart: ImmersionChart,
    pub direction: Vector,
    pub expect_cylinder: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarnessOutcome {
    pub name: String,
    pub n: usize,
    pub theta: f64,
    pub is_minimal: bool,
    pub is_helix: bool,
    pub is_ruled: bool,
    pub is_cylinder: bool,
    pub expect_cylinder: bool,
    pub affine_rank: usize,
    pub full: bool,
    /// Minimal ruled helix with `θ > tol` that is full.
    pub counterexample: bool,
    /// Expected cylinder that `is_helix` did not flag as one.
    pub cylinder_mismatch: bool,
    /// Minimal helix with defined `T` that failed the ruled test; recorded,
    /// not judged.
    pub non_ruled_candidate: bool,
}

fn e(n: usize, i: usize) -> Vector {
    Vector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 })
}

fn moved(rng: &mut Rng, name: String, chart: ImmersionChart, d: Vector, cyl: bool) -> HarnessCase {
    let n = chart.n();
    let rot = random_rotation(rng, n);
    let shift = Vector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
    HarnessCase {
        name,
        chart: chart.rigid_motion(&rot, &shift),
        direction: &rot * d,
        expect_cylinder: cyl,
    }
}

/// Seeded corpus: tilted planes in `R^3` and `R^4`, products of the
/// catenoid and helicoid with a line tilted into an extra dimension,
/// cylinders over the catenoid and helicoid, and complex lines in `C^2`,
/// each under a random rigid motion.
pub fn main_theorem_corpus(rng: &mut Rng) -> Result<Vec<HarnessCase>> {
    let mut out = Vec::new();
    for theta in [0.3, 0.7, 1.2] {
        let ch = builtin::tilted_plane(theta)?;
        out.push(moved(rng, format!("tilted_plane({theta})"), ch, e(3, 2), false));
    }
    let ch = builtin::tilted_plane(0.5)?.embed(4);
    out.push(moved(rng, "tilted_plane(0.5)@R4".into(), ch, e(4, 2), false));
    let ch = builtin::tilted_plane(0.0)?;
    out.push(moved(rng, "tilted_plane(0)".into(), ch, e(3, 2), true));

    for (label, surf) in [
        ("catenoid", builtin::catenoid(1.0)?),
        ("helicoid", builtin::helicoid(0.5)?),
    ] {
        let prod = surf.cylinder(1.0);
        out.push(moved(rng, format!("{label}xR"), prod.clone(), e(4, 3), true));
        for theta in [0.4_f64, 1.0] {
            let d = e(5, 3) * theta.cos() + e(5, 4) * theta.sin();
            out.push(moved(
                rng,
                format!("{label}xR@R5(θ={theta})"),
                prod.embed(5),
                d,
                false,
            ));
        }
    }

    for _ in 0..3 {
        let w = Vector::from_fn(4, |_, _| rng.random_range(-1.0..1.0));
        let d = Vector::from_fn(4, |_, _| rng.random_range(-1.0..1.0));
        let ch = builtin::complex_line(&w, &Vector::zeros(4))?;
        out.push(moved(rng, "complex_line".into(), ch, d, false));
    }
    Ok(out)
}

pub fn main_theorem_harness(
    cases: &[HarnessCase],
    rng: &mut Rng,
    theta_tol: f64,
) -> Result<Vec<HarnessOutcome>> {
    let mut out = Vec::with_capacity(cases.len());
    for case in cases {
        let ch = &case.chart;
        let minimal = minimality_report(ch, rng, HELIX_SAMPLES, MINIMAL_TOL)?;
        let helix = is_helix(ch, &case.direction, rng, HELIX_SAMPLES, ANGLE_TOL)?;
        let points: Vec<Vector> = ch
            .samples(rng, FULLNESS_SAMPLES)
            .iter()
            .map(|u| ch.point(u))
            .collect();
        let rank = affine_rank(&points, FULLNESS_CUTOFF);
        let full = rank == ch.n();
        let ruled = helix.is_ruled.unwrap_or(false);
        let theta = helix.angle_mean;
        out.push(HarnessOutcome {
            name: case.name.clone(),
            n: ch.n(),
            theta,
            is_minimal: minimal.is_minimal,
            is_helix: helix.is_helix,
            is_ruled: ruled,
            is_cylinder: helix.is_cylinder,
            expect_cylinder: case.expect_cylinder,
            affine_rank: rank,
            full,
            counterexample: minimal.is_minimal && helix.is_helix && ruled && theta > theta_tol && full,
            cylinder_mismatch: case.expect_cylinder && !helix.is_cylinder,
            non_ruled_candidate: minimal.is_minimal
                && helix.is_helix
                && helix.t_defined
                && helix.is_ruled == Some(false),
        });
    }
    Ok(out)
}
