//! First and second fundamental forms, shape operators and mean curvature
//! of an immersion `M -> R^n`.
//!
//! Sign convention: `A_xi(X) = -(D_X xi)^T`, so that
//! `<A_xi X, Y> = <alpha(X, Y), xi>` with `alpha(X, Y) = (D_X Y)^perp`.
//! The second fundamental form is always computed from exact second jets
//! of the chart, never by differentiating frames.

use serde::Serialize;

use crate::catalog::ImmersionChart;
use crate::error::{GeomError, Result};
use crate::numerics::{columns, det, gram_schmidt, inv, Jet2, Mat, Rng, Vector};

/// Residual norm below which a jacobian column counts as dependent.
pub const RANK_TOL: f64 = 1e-9;

/// Orthonormal tangent and normal frames at a chart point.
#[derive(Debug, Clone)]
pub struct FramePack {
    pub point: Vec<f64>,
    pub jet: Jet2,
    /// `E_i`, orthonormal, spanning the jacobian column space.
    pub tangent: Vec<Vector>,
    /// `xi_k`, orthonormal, completing `tangent` to a basis of `R^n`.
    pub normal: Vec<Vector>,
    /// `E_i = sum_a coeffs[(a, i)] d_a phi`.
    pub coeffs: Mat,
    /// Inverse of the induced metric `J^T J`.
    pub metric_inv: Mat,
}

impl FramePack {
    pub fn m(&self) -> usize {
        self.tangent.len()
    }

    pub fn n(&self) -> usize {
        self.jet.n()
    }

    pub fn tangent_matrix(&self) -> Mat {
        columns(&self.tangent, self.n())
    }

    pub fn normal_matrix(&self) -> Mat {
        columns(&self.normal, self.n())
    }

    /// Orthogonal projection onto the tangent space.
    pub fn tangent_part(&self, v: &Vector) -> Vector {
        self.tangent
            .iter()
            .fold(Vector::zeros(self.n()), |acc, e| acc + e * e.dot(v))
    }

    pub fn normal_part(&self, v: &Vector) -> Vector {
        v - self.tangent_part(v)
    }

    /// Chart-coordinate components of a tangent vector:
    /// `c = (J^T J)^{-1} J^T v`.
    pub fn coords_of(&self, v: &Vector) -> Vector {
        &self.metric_inv * (self.jet.jacobian.transpose() * v)
    }

    /// Ambient vector `D_v w` for a map `w(u)` given its jacobian, where
    /// `v` is tangent.
    pub fn directional(&self, jacobian_of_w: &Mat, v: &Vector) -> Vector {
        jacobian_of_w * self.coords_of(v)
    }
}

/// Frames at `u`. Normals are completed from the standard basis in order;
/// for hypersurfaces the normal is oriented so that
/// `det[d_1 phi, ..., d_m phi, xi] > 0`.
pub fn frames(chart: &ImmersionChart, u: &[f64]) -> Result<FramePack> {
    frames_from_jet(chart.jet2(u), u)
}

pub fn frames_from_jet(jet: Jet2, u: &[f64]) -> Result<FramePack> {
    let (n, m) = (jet.n(), jet.m());
    let cols: Vec<Vector> = (0..m).map(|a| jet.jacobian.column(a).clone_owned()).collect();
    let scale = cols.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1.0);
    let tangent = gram_schmidt(&cols, RANK_TOL * scale);
    if tangent.len() < m {
        return Err(GeomError::DegenerateImmersion {
            point: u.to_vec(),
            rank: tangent.len(),
            expected: m,
        });
    }
    let mut all = tangent.clone();
    all.extend((0..n).map(|i| Vector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 })));
    let completed = gram_schmidt(&all, 1e-6);
    let mut normal: Vec<Vector> = completed[m..].to_vec();
    debug_assert_eq!(normal.len(), n - m);
    if n == m + 1 {
        let mut basis = jet.jacobian.clone().insert_column(m, 0.0);
        basis.set_column(m, &normal[0]);
        if det(&basis) < 0.0 {
            normal[0] = -&normal[0];
        }
    }
    let g = jet.jacobian.transpose() * &jet.jacobian;
    let metric_inv = inv(&g)?;
    let e = columns(&tangent, n);
    let coeffs = &metric_inv * jet.jacobian.transpose() * &e;
    Ok(FramePack {
        point: u.to_vec(),
        jet,
        tangent,
        normal,
        coeffs,
        metric_inv,
    })
}

/// Second fundamental form, shape operators and mean curvature vector.
#[derive(Debug, Clone)]
pub struct ShapePack {
    pub frames: FramePack,
    /// `alpha[k][(i, j)] = <alpha(E_i, E_j), xi_k>`.
    pub alpha: Vec<Mat>,
    /// Matrix of `A_{xi_k}` in the orthonormal frame `E`.
    pub shape_ops: Vec<Mat>,
    /// `H = sum_k trace(alpha[k]) xi_k`.
    pub mean_curvature: Vector,
}

impl ShapePack {
    /// `alpha(E_i, E_j)` as an ambient vector.
    pub fn alpha_vector(&self, i: usize, j: usize) -> Vector {
        let n = self.frames.n();
        self.alpha
            .iter()
            .zip(&self.frames.normal)
            .fold(Vector::zeros(n), |acc, (a, xi)| acc + xi * a[(i, j)])
    }

    /// `alpha(X, Y)` for tangent vectors given by frame components.
    pub fn alpha_on(&self, x: &Vector, y: &Vector) -> Vector {
        let n = self.frames.n();
        self.alpha
            .iter()
            .zip(&self.frames.normal)
            .fold(Vector::zeros(n), |acc, (a, xi)| acc + xi * (x.transpose() * a * y)[(0, 0)])
    }

    /// Matrix of `A_nu` in the frame `E` for an arbitrary normal vector `nu`.
    pub fn shape_operator_along(&self, nu: &Vector) -> Mat {
        let m = self.frames.m();
        self.alpha
            .iter()
            .zip(&self.frames.normal)
            .fold(Mat::zeros(m, m), |acc, (a, xi)| acc + a * xi.dot(nu))
    }

    /// Largest `|alpha(E_i, E_j) - alpha(E_j, E_i)|` over the frame.
    pub fn asymmetry(&self) -> f64 {
        self.alpha
            .iter()
            .map(crate::numerics::linalg::asymmetry)
            .fold(0.0, f64::max)
    }

    /// Frobenius norm of the whole second fundamental form.
    pub fn alpha_norm(&self) -> f64 {
        self.alpha.iter().map(|a| a.norm_squared()).sum::<f64>().sqrt()
    }
}

pub fn second_fundamental_form(chart: &ImmersionChart, u: &[f64]) -> Result<ShapePack> {
    shape_from_frames(frames(chart, u)?)
}

pub fn shape_from_frames(frames: FramePack) -> Result<ShapePack> {
    let m = frames.m();
    let c = &frames.coeffs;
    let alpha: Vec<Mat> = frames
        .normal
        .iter()
        .map(|xi| {
            let b = Mat::from_fn(m, m, |a, bb| {
                frames
                    .jet
                    .hessians
                    .iter()
                    .zip(xi.iter())
                    .map(|(h, x)| h[(a, bb)] * x)
                    .sum()
            });
            c.transpose() * b * c
        })
        .collect();
    let shape_ops = alpha.clone();
    let n = frames.n();
    let mean_curvature = alpha
        .iter()
        .zip(&frames.normal)
        .fold(Vector::zeros(n), |acc, (a, xi)| acc + xi * a.trace());
    Ok(ShapePack {
        frames,
        alpha,
        shape_ops,
        mean_curvature,
    })
}

pub fn mean_curvature(chart: &ImmersionChart, u: &[f64]) -> Result<Vector> {
    Ok(second_fundamental_form(chart, u)?.mean_curvature)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimalityReport {
    pub samples: usize,
    pub max_mean_curvature: f64,
    pub is_minimal: bool,
}

/// Max of `|H|` over seeded samples; minimal iff the max is below `tol`.
pub fn minimality_report(
    chart: &ImmersionChart,
    rng: &mut Rng,
    sample_count: usize,
    tol: f64,
) -> Result<MinimalityReport> {
    if sample_count == 0 {
        return Err(GeomError::param("samples", "need at least one sample"));
    }
    let mut worst = 0.0_f64;
    for u in chart.samples(rng, sample_count) {
        worst = worst.max(mean_curvature(chart, &u)?.norm());
    }
    Ok(MinimalityReport {
        samples: sample_count,
        max_mean_curvature: worst,
        is_minimal: worst < tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin;
    use crate::numerics::Tolerances;

    #[test]
    fn plane_is_totally_geodesic() {
        let ch = builtin::tilted_plane(0.4).unwrap();
        let s = second_fundamental_form(&ch, &[0.2, -0.3]).unwrap();
        assert!(s.alpha_norm() < 1e-15);
        let f1 = frames(&ch, &[0.5, 0.5]).unwrap();
        for (a, b) in s.frames.tangent.iter().zip(&f1.tangent) {
            assert!((a - b).norm() < 1e-15);
        }
        let mut rng = Tolerances::default().rng();
        let rep = minimality_report(&ch, &mut rng, 20, 1e-6).unwrap();
        assert!(rep.is_minimal && rep.max_mean_curvature < 1e-12);
    }

    #[test]
    fn sphere_outward_normal_and_shape() {
        let r = 2.0;
        let ch = builtin::round_sphere(r).unwrap();
        let u = [std::f64::consts::FRAC_PI_2, 0.7];
        let s = second_fundamental_form(&ch, &u).unwrap();
        let radial = ch.point(&u) / r;
        assert!((&s.frames.normal[0] - &radial).norm() < 1e-12);
        let a = &s.shape_ops[0];
        assert!((a - Mat::identity(2, 2) * (-1.0 / r)).norm() < 1e-12);
        assert!((s.mean_curvature.norm() - 2.0 / r).abs() < 1e-12);
    }

    #[test]
    fn degenerate_jacobian_detected() {
        use crate::catalog::{Domain, JetMap};
        let map = JetMap::new(2, 3, |v| {
            vec![v[0].clone(), &v[0] * 2.0, crate::numerics::Dual3::constant(0.0) + &v[1] * 0.0]
        });
        let ch = ImmersionChart::new("bad", Domain::cube(2, 1.0), map).unwrap();
        assert!(matches!(
            frames(&ch, &[0.1, 0.1]),
            Err(GeomError::DegenerateImmersion { rank: 1, .. })
        ));
    }

    #[test]
    fn cone_has_one_flat_direction() {
        let ch = builtin::cone(1.0, 0.1).unwrap();
        let s = second_fundamental_form(&ch, &[1.0, 0.0]).unwrap();
        let (vals, _) = crate::numerics::sym_eig(&s.shape_ops[0]).unwrap();
        let nonzero = vals.iter().filter(|v| v.abs() > 1e-10).count();
        assert_eq!(nonzero, 1);
    }
}
