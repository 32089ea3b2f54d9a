//! Sol geometry `e^{2z} dx^2 + e^{-2z} dy^2 + dz^2` and the table of its
//! connection and curvature values.

use crate::catalog::{Domain, ScalarField};
use crate::check::Check;
use crate::error::Result;
use crate::intrinsic::curvature::{curvature_from, gradient_from, laplacian_from};
use crate::intrinsic::MetricChart;
use crate::numerics::{Dual3, Vector};

pub const SOL_ANCHOR: &str = "ejem:funcion-armonica-eikonal";

/// Sol metric on the cube `[-half, half]^3` in `(x, y, z)`.
pub fn sol_metric(half: f64) -> MetricChart {
    MetricChart::from_duals("sol", Domain::cube(3, half), |v| {
        let zero = Dual3::constant(0.0);
        vec![
            (&v[2] * 2.0).exp(),
            zero.clone(),
            zero.clone(),
            zero.clone(),
            (&v[2] * -2.0).exp(),
            zero.clone(),
            zero.clone(),
            zero,
            Dual3::constant(1.0),
        ]
    })
}

fn e(i: usize) -> Vector {
    Vector::from_fn(3, |r, _| if r == i { 1.0 } else { 0.0 })
}

/// Every value listed for Sol, evaluated at `point = (x, y, z)`.
pub fn sol_verification(point: [f64; 3], tol: f64) -> Result<Vec<Check>> {
    let g = sol_metric(point.iter().fold(1.0_f64, |a, b| a.max(b.abs() + 1.0)));
    let jet = g.validate_at(&point)?;
    let pack = curvature_from(&jet)?;
    let ch = &pack.christoffels;
    let z = point[2];
    let (ez, emz) = ((2.0 * z).exp(), (-2.0 * z).exp());
    let (dx, dy, dz) = (e(0), e(1), e(2));
    let mut out = Vec::new();

    let connection = [
        ("nabla_dx_dx", &dx, &dx, &dz * -ez),
        ("nabla_dx_dy", &dx, &dy, Vector::zeros(3)),
        ("nabla_dx_dz", &dx, &dz, dx.clone()),
        ("nabla_dy_dy", &dy, &dy, &dz * emz),
        ("nabla_dy_dz", &dy, &dz, -&dy),
        ("nabla_dz_dz", &dz, &dz, Vector::zeros(3)),
    ];
    for (name, x, y, expected) in connection {
        let got = ch.covariant(x, y);
        out.push(Check::norms(
            name,
            SOL_ANCHOR,
            got.norm(),
            expected.norm(),
            (&got - &expected).amax(),
            tol,
        ));
    }

    let r_vec = |i: usize, j: usize, k: usize| Vector::from_fn(3, |l, _| pack.r_up(i, j, k, l));
    for (name, (i, j, k), expected) in [
        ("R(dx,dy)dx", (0, 1, 0), &dy * ez),
        ("R(dx,dz)dx", (0, 2, 0), &dz * -ez),
    ] {
        let got = r_vec(i, j, k);
        out.push(Check::norms(
            name,
            SOL_ANCHOR,
            got.norm(),
            expected.norm(),
            (&got - &expected).amax(),
            tol,
        ));
    }
    out.push(Check::scalar("<R(dx,dy)dx,dy>", SOL_ANCHOR, pack.r(0, 1, 0, 1), 1.0, tol));
    out.push(Check::scalar("<R(dx,dz)dx,dz>", SOL_ANCHOR, pack.r(0, 2, 0, 2), -ez, tol));

    let names = ["x", "y", "z"];
    for (a, b) in [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)] {
        let expected = if (a, b) == (2, 2) { -2.0 } else { 0.0 };
        out.push(Check::scalar(
            format!("ricci_{}{}", names[a], names[b]),
            SOL_ANCHOR,
            pack.ricci[(a, b)],
            expected,
            tol,
        ));
    }
    let kernel_res = (&pack.ricci * &dx).amax().max((&pack.ricci * &dy).amax());
    out.push(Check::below("ricci_kernel_xy", SOL_ANCHOR, kernel_res, tol));

    let f = ScalarField::coordinate(2);
    let fj = f.jet(&point, 2);
    out.push(Check::scalar("laplacian_z", SOL_ANCHOR, laplacian_from(ch, &fj), 0.0, tol));
    let grad = gradient_from(ch, &fj);
    out.push(Check::norms(
        "gradient_z",
        SOL_ANCHOR,
        grad.norm(),
        1.0,
        (&grad - &dz).amax(),
        tol,
    ));
    let eik = crate::intrinsic::eikonal_gradient(&g, &f, &point)?;
    out.push(Check::below("eikonal_z", SOL_ANCHOR, eik.amax(), tol));
    out.push(Check::flag(
        "dz_not_parallel",
        SOL_ANCHOR,
        ch.covariant(&dx, &dz).norm() > tol,
        true,
    ));
    out.push(Check::below("bianchi", SOL_ANCHOR, pack.bianchi_residual, tol));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sol_table_at_origin_and_off_origin() {
        for p in [[0.0, 0.0, 0.0], [0.2, -0.1, 0.3], [1.0, 2.0, -0.8]] {
            let checks = sol_verification(p, 1e-12).unwrap();
            for c in &checks {
                assert!(c.pass, "{c:?} at {p:?}");
            }
        }
    }

    #[test]
    fn curvature_pairing_at_z_point_three() {
        let checks = sol_verification([0.0, 0.0, 0.3], 1e-12).unwrap();
        let c = checks.iter().find(|c| c.name == "<R(dx,dz)dx,dz>").unwrap();
        assert!((c.lhs + 1.8221188).abs() < 1e-6);
    }
}
