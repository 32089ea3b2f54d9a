//! Parallel submanifolds `p -> p + t η(p)` for a normal field `η` of
//! constant length: their frames, metric and shape-operator trace in
//! closed form, and the brute-force versions read off the offset chart.
//!
//! Offsets are parametrised by `t` with `η` as supplied, so `t η` plays
//! the role of the scaled field. All closed forms are written in an
//! arbitrary orthonormal frame with `S` the matrix of `A_η`; in an
//! eigenframe `S` is the diagonal matrix `D`.

pub mod families;

use serde::Serialize;

use crate::catalog::{ImmersionChart, JetMap};
use crate::error::{GeomError, Result};
use crate::extrinsic::{frames, minimality_report, shape_from_frames, ShapePack};
use crate::numerics::{det, inv, sym_eig, Mat, Rng, Vector};

/// `|det(1 - t A_η)|` below this means the offset is singular.
pub const FOCAL_DET_TOL: f64 = 1e-10;
/// `det G` below this makes the trace formula undefined.
pub const METRIC_DET_TOL: f64 = 1e-12;

/// A normal field along a base immersion, with exact jets.
#[derive(Debug, Clone)]
pub struct NormalField {
    pub name: String,
    pub base: ImmersionChart,
    pub eta: JetMap,
    pub length: f64,
}

impl NormalField {
    pub fn new(
        name: impl Into<String>,
        base: ImmersionChart,
        eta: JetMap,
        length: f64,
    ) -> Result<NormalField> {
        if eta.m() != base.m() || eta.n() != base.n() {
            return Err(GeomError::DimensionMismatch(format!(
                "field is R^{} -> R^{}, base is R^{} -> R^{}",
                eta.m(),
                eta.n(),
                base.m(),
                base.n()
            )));
        }
        if !(length > 0.0) {
            return Err(GeomError::param("length", "must be positive"));
        }
        Ok(NormalField {
            name: name.into(),
            base,
            eta,
            length,
        })
    }

    /// Constant field `v` (must be normal to `base` for the result to be
    /// valid).
    pub fn constant(base: ImmersionChart, v: Vector) -> Result<NormalField> {
        let len = v.norm();
        let eta = JetMap::constant(base.m(), v);
        NormalField::new("constant", base, eta, len)
    }

    /// Checks normality and constant length at seeded samples.
    pub fn validate(&self, rng: &mut Rng, samples: usize, tol: f64) -> Result<()> {
        for u in self.base.samples(rng, samples) {
            let fr = frames(&self.base, &u)?;
            let eta = self.eta.value(&u);
            let tangential = fr.tangent_part(&eta).norm();
            if tangential > tol {
                return Err(GeomError::contract(format!(
                    "field `{}` has tangential part {tangential:e} at {u:?}",
                    self.name
                )));
            }
            let len = eta.norm();
            if (len - self.length).abs() > tol {
                return Err(GeomError::contract(format!(
                    "field `{}` has length {len} at {u:?}, expected {}",
                    self.name, self.length
                )));
            }
        }
        Ok(())
    }
}

/// `η`, its ambient derivatives and their decomposition at one point.
#[derive(Debug, Clone)]
pub struct NormalConnection {
    pub shape: ShapePack,
    pub eta: Vector,
    /// `D_{E_i} η`.
    pub d_eta: Vec<Vector>,
    /// `∇^⊥_{E_i} η`, the normal part of `D_{E_i} η`.
    pub nabla_perp: Vec<Vector>,
    /// Matrix of `A_η` in the frame `E`, from the second fundamental form.
    pub a_eta: Mat,
}

impl NormalConnection {
    /// `comp[(k, i)] = <∇^⊥_{E_i} η, ξ_k>`.
    pub fn components(&self) -> Mat {
        let fr = &self.shape.frames;
        Mat::from_fn(fr.normal.len(), fr.m(), |k, i| {
            fr.normal[k].dot(&self.nabla_perp[i])
        })
    }

    /// Largest `|(D_{E_i} η)^T + A_η E_i|`: the tangential part of the
    /// derivative against the shape operator from `α`.
    pub fn weingarten_residual(&self) -> f64 {
        let fr = &self.shape.frames;
        (0..fr.m())
            .map(|i| {
                let a_ei = (0..fr.m()).fold(Vector::zeros(fr.n()), |acc, j| {
                    acc + &fr.tangent[j] * self.a_eta[(j, i)]
                });
                (fr.tangent_part(&self.d_eta[i]) + a_ei).norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn nabla_perp_norm(&self) -> f64 {
        self.nabla_perp.iter().map(|v| v.norm_squared()).sum::<f64>().sqrt()
    }
}

pub fn normal_connection(field: &NormalField, u: &[f64]) -> Result<NormalConnection> {
    let shape = shape_from_frames(frames(&field.base, u)?)?;
    let (eta, jac) = field.eta.jet1(u);
    let fr = &shape.frames;
    let d_eta: Vec<Vector> = (0..fr.m())
        .map(|i| &jac * fr.coeffs.column(i))
        .collect();
    let nabla_perp = d_eta.iter().map(|v| fr.normal_part(v)).collect();
    let a_eta = shape.shape_operator_along(&eta);
    Ok(NormalConnection {
        shape,
        eta,
        d_eta,
        nabla_perp,
        a_eta,
    })
}

/// `S` (the matrix of `A_η`) and `N_ij = <∇^⊥_{E_i} η, ∇^⊥_{E_j} η>` in an
/// orthonormal tangent frame, by default the eigenframe of `A_η`.
#[derive(Debug, Clone)]
pub struct OffsetData {
    pub point: Vec<f64>,
    /// Eigenvalues of `A_η`, descending.
    pub lambdas: Vec<f64>,
    /// Orthonormal tangent frame, as ambient vectors.
    pub frame: Vec<Vector>,
    /// Chart coordinates of the frame vectors, one per column.
    pub frame_coords: Mat,
    /// Matrix of `A_η` in `frame` (diagonal for the eigenframe).
    pub d: Mat,
    pub n: Mat,
    /// `∇^⊥_{frame_i} η`.
    pub nabla_perp: Vec<Vector>,
    /// Orthonormal normal frame of the base.
    pub normal: Vec<Vector>,
    pub eta: Vector,
}

impl OffsetData {
    pub fn m(&self) -> usize {
        self.frame.len()
    }

    /// Same data in the frame `frame_i' = sum_j q[(j, i)] frame_j` for an
    /// orthogonal `q`.
    pub fn rotated(&self, q: &Mat) -> OffsetData {
        let m = self.m();
        let amb = self.eta.len();
        let combine = |vs: &[Vector]| -> Vec<Vector> {
            (0..m)
                .map(|i| (0..m).fold(Vector::zeros(amb), |acc, j| acc + &vs[j] * q[(j, i)]))
                .collect()
        };
        let nabla_perp = combine(&self.nabla_perp);
        OffsetData {
            point: self.point.clone(),
            lambdas: self.lambdas.clone(),
            frame: combine(&self.frame),
            frame_coords: &self.frame_coords * q,
            d: q.transpose() * &self.d * q,
            n: gram(&nabla_perp),
            nabla_perp,
            normal: self.normal.clone(),
            eta: self.eta.clone(),
        }
    }

    fn one_minus_ts(&self, t: f64) -> Mat {
        Mat::identity(self.m(), self.m()) - &self.d * t
    }

    fn check_focal(&self, t: f64) -> Result<Mat> {
        let a = self.one_minus_ts(t);
        let dt = det(&a);
        if dt.abs() < FOCAL_DET_TOL {
            return Err(GeomError::ImmersionDegeneratesAtT { t, det: dt });
        }
        Ok(a)
    }
}

fn gram(vs: &[Vector]) -> Mat {
    Mat::from_fn(vs.len(), vs.len(), |i, j| vs[i].dot(&vs[j]))
}

pub fn offset_data(field: &NormalField, u: &[f64]) -> Result<OffsetData> {
    let nc = normal_connection(field, u)?;
    let fr = &nc.shape.frames;
    let (lambdas, q) = sym_eig(&nc.a_eta)?;
    let m = fr.m();
    let frame: Vec<Vector> = (0..m)
        .map(|i| (0..m).fold(Vector::zeros(fr.n()), |acc, j| acc + &fr.tangent[j] * q[(j, i)]))
        .collect();
    let nabla_perp: Vec<Vector> = (0..m)
        .map(|i| (0..m).fold(Vector::zeros(fr.n()), |acc, j| acc + &nc.nabla_perp[j] * q[(j, i)]))
        .collect();
    let d = Mat::from_diagonal(&Vector::from_vec(lambdas.clone()));
    Ok(OffsetData {
        point: u.to_vec(),
        frame_coords: &fr.coeffs * &q,
        n: gram(&nabla_perp),
        lambdas,
        frame,
        d,
        nabla_perp,
        normal: fr.normal.clone(),
        eta: nc.eta,
    })
}

/// Largest `|det(1 - t A_η)|` violation over seeded samples.
fn scan_focal(field: &NormalField, t: f64, rng: &mut Rng, samples: usize) -> Result<()> {
    for u in field.base.samples(rng, samples) {
        offset_data(field, &u)?.check_focal(t)?;
    }
    Ok(())
}

/// Chart `u -> base(u) + t η(u)`, after scanning seeded samples for focal
/// points.
pub fn offset_immersion(
    field: &NormalField,
    t: f64,
    rng: &mut Rng,
    samples: usize,
) -> Result<ImmersionChart> {
    scan_focal(field, t, rng, samples)?;
    offset_chart_unchecked(field, t)
}

pub fn offset_chart_unchecked(field: &NormalField, t: f64) -> Result<ImmersionChart> {
    ImmersionChart::new(
        format!("offset({}, {}, t={t})", field.base.name, field.name),
        field.base.domain.clone(),
        field.base.map.add_scaled(&field.eta, t),
    )
}

/// Largest `|t|` for which `1 - t λ` stays positive for every sampled
/// eigenvalue, i.e. `1 / max |λ|` (infinite for totally geodesic fields).
pub fn valid_t_radius(field: &NormalField, rng: &mut Rng, samples: usize) -> Result<f64> {
    let mut max_l = 0.0_f64;
    for u in field.base.samples(rng, samples) {
        for l in offset_data(field, &u)?.lambdas {
            max_l = max_l.max(l.abs());
        }
    }
    Ok(if max_l > 0.0 { 1.0 / max_l } else { f64::INFINITY })
}

#[derive(Debug, Clone)]
pub struct OffsetFrames {
    /// `X_i = (1 - t S) E_i + t ∇^⊥_{E_i} η`.
    pub x: Vec<Vector>,
    /// `ξ̃_j = ξ_j - sum_k c_jk E_k` with `c_j = t (1 - t S)^{-1} b_j`,
    /// `b_jk = <∇^⊥_{E_k} η, ξ_j>`.
    pub xi: Vec<Vector>,
}

pub fn offset_frames_from(data: &OffsetData, t: f64) -> Result<OffsetFrames> {
    let a = data.check_focal(t)?;
    let m = data.m();
    let x = (0..m)
        .map(|i| {
            (0..m).fold(&data.nabla_perp[i] * t, |acc, j| acc + &data.frame[j] * a[(j, i)])
        })
        .collect();
    let a_inv = inv(&a)?;
    let xi = data
        .normal
        .iter()
        .map(|xi_j| {
            let b = Vector::from_fn(m, |k, _| data.nabla_perp[k].dot(xi_j));
            let c = &a_inv * b * t;
            (0..m).fold(xi_j.clone(), |acc, k| acc - &data.frame[k] * c[k])
        })
        .collect();
    Ok(OffsetFrames { x, xi })
}

pub fn offset_frames(field: &NormalField, u: &[f64], t: f64) -> Result<OffsetFrames> {
    offset_frames_from(&offset_data(field, u)?, t)
}

/// `G = (1 - t S)^2 + t^2 N`.
pub fn offset_metric_from(data: &OffsetData, t: f64) -> Result<Mat> {
    let a = data.check_focal(t)?;
    Ok(&a * &a + &data.n * (t * t))
}

pub fn offset_metric(field: &NormalField, u: &[f64], t: f64) -> Result<Mat> {
    offset_metric_from(&offset_data(field, u)?, t)
}

/// `Tr((S - t S^2 - t N) G^{-1})`.
pub fn offset_shape_trace_from(data: &OffsetData, t: f64) -> Result<f64> {
    let g = offset_metric_from(data, t)?;
    let dg = det(&g);
    if dg.abs() <= METRIC_DET_TOL {
        return Err(GeomError::SingularOffsetMetric { det: dg });
    }
    let b = &data.d - (&data.d * &data.d) * t - &data.n * t;
    Ok((b * inv(&g)?).trace())
}

pub fn offset_shape_trace(field: &NormalField, u: &[f64], t: f64) -> Result<f64> {
    offset_shape_trace_from(&offset_data(field, u)?, t)
}

/// Direct computation on the offset chart `ψ = base + t η`.
#[derive(Debug, Clone)]
pub struct OffsetOracle {
    /// Gram matrix of `ψ_* (frame_i)`.
    pub metric: Mat,
    /// `ψ_* (frame_i)`.
    pub x: Vec<Vector>,
    /// `Tr(g_ψ^{-1} b_ψ)` with `b_ψ[a][b] = <d_a d_b ψ, η>`.
    pub trace: f64,
    /// Orthonormal normal frame of the offset chart.
    pub normal: Vec<Vector>,
}

pub fn offset_oracle(field: &NormalField, data: &OffsetData, t: f64) -> Result<OffsetOracle> {
    let chart = offset_chart_unchecked(field, t)?;
    let fr = frames(&chart, &data.point)?;
    let jac = &fr.jet.jacobian;
    let xm = jac * &data.frame_coords;
    let metric = xm.transpose() * &xm;
    let m = chart.m();
    let eta = field.eta.value(&data.point);
    let b = Mat::from_fn(m, m, |a, c| fr.jet.second(a, c).dot(&eta));
    let g = jac.transpose() * jac;
    let trace = (inv(&g)? * b).trace();
    Ok(OffsetOracle {
        metric,
        x: (0..m).map(|i| xm.column(i).clone_owned()).collect(),
        trace,
        normal: fr.normal.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OffsetCertificate {
    pub t_grid: Vec<f64>,
    /// Largest `|H|` of each offset.
    pub max_mean_curvature: Vec<f64>,
    pub offsets_minimal: bool,
    pub max_nabla_perp: f64,
    pub max_shape: f64,
    pub eta_constant: bool,
}

/// Minimality of every offset in `t_grid` against constancy of `η`.
pub fn minimal_offsets_certificate(
    field: &NormalField,
    t_grid: &[f64],
    rng: &mut Rng,
    samples: usize,
    tol: f64,
) -> Result<OffsetCertificate> {
    if t_grid.len() < 5 {
        return Err(GeomError::param("t_grid", "needs at least 5 values"));
    }
    let mut hs = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let chart = offset_immersion(field, t, rng, samples)?;
        hs.push(minimality_report(&chart, rng, samples, tol)?.max_mean_curvature);
    }
    let (mut np, mut sh) = (0.0_f64, 0.0_f64);
    for u in field.base.samples(rng, samples) {
        let nc = normal_connection(field, &u)?;
        np = np.max(nc.nabla_perp_norm());
        sh = sh.max(nc.a_eta.norm());
    }
    Ok(OffsetCertificate {
        t_grid: t_grid.to_vec(),
        offsets_minimal: hs.iter().all(|h| *h < tol),
        max_mean_curvature: hs,
        max_nabla_perp: np,
        max_shape: sh,
        eta_constant: np.max(sh) < tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FoliationVerdict {
    /// All leaves minimal; the leaf is totally geodesic and lies in the
    /// affine subspace through a point spanned by its tangent space.
    TotallyGeodesic { max_alpha: f64, affine_residual: f64 },
    /// All leaves minimal but the flatness conclusion failed.
    Violated { max_alpha: f64, affine_residual: f64 },
    /// Some leaf is not minimal, so the hypothesis does not apply.
    NotMinimalFoliation { max_mean_curvature: f64 },
}

/// Leaves `leaf + t η` for `t` in the grid (and `t = 0`).
pub fn foliation_flatness_check(
    field: &NormalField,
    t_grid: &[f64],
    rng: &mut Rng,
    samples: usize,
    tol: f64,
) -> Result<FoliationVerdict> {
    let mut worst_h = minimality_report(&field.base, rng, samples, tol)?.max_mean_curvature;
    for &t in t_grid {
        let chart = offset_immersion(field, t, rng, samples)?;
        worst_h = worst_h.max(minimality_report(&chart, rng, samples, tol)?.max_mean_curvature);
    }
    if worst_h >= tol {
        return Ok(FoliationVerdict::NotMinimalFoliation {
            max_mean_curvature: worst_h,
        });
    }
    let leaf = &field.base;
    let center = leaf.domain.center();
    let p0 = leaf.point(&center);
    let normals = frames(leaf, &center)?.normal;
    let (mut max_alpha, mut affine) = (0.0_f64, 0.0_f64);
    for u in leaf.samples(rng, samples) {
        let s = shape_from_frames(frames(leaf, &u)?)?;
        max_alpha = max_alpha.max(s.alpha_norm());
        let w = leaf.point(&u) - &p0;
        for xi in &normals {
            affine = affine.max(xi.dot(&w).abs());
        }
    }
    Ok(if max_alpha < tol && affine < 1e-8 {
        FoliationVerdict::TotallyGeodesic {
            max_alpha,
            affine_residual: affine,
        }
    } else {
        FoliationVerdict::Violated {
            max_alpha,
            affine_residual: affine,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::families::*;
    use super::*;
    use crate::catalog::builtin;
    use crate::numerics::Tolerances;

    #[test]
    fn constant_field_on_plane() {
        let base = builtin::flat(2, 1.0).unwrap().embed(3);
        let f = NormalField::constant(base, Vector::from_vec(vec![0.0, 0.0, 1.0])).unwrap();
        let nc = normal_connection(&f, &[0.1, 0.2]).unwrap();
        assert_eq!(nc.nabla_perp_norm(), 0.0);
        let fr = offset_frames(&f, &[0.1, 0.2], 0.7).unwrap();
        let data = offset_data(&f, &[0.1, 0.2]).unwrap();
        for (x, e) in fr.x.iter().zip(&data.frame) {
            assert!((x - e).norm() < 1e-15);
        }
        assert_eq!(offset_shape_trace(&f, &[0.1, 0.2], 0.7).unwrap(), 0.0);
    }

    #[test]
    fn sphere_offset_is_bigger_sphere() {
        let f = sphere_outward(1.0).unwrap();
        let u = [1.0, 0.5];
        let data = offset_data(&f, &u).unwrap();
        assert!(data.lambdas.iter().all(|l| (l + 1.0).abs() < 1e-12));
        let g = offset_metric_from(&data, 0.5).unwrap();
        assert!((g - Mat::identity(2, 2) * 2.25).norm() < 1e-12);
        let tr = offset_shape_trace_from(&data, 0.5).unwrap();
        assert!((tr + 4.0 / 3.0).abs() < 1e-12);
        let oracle = offset_oracle(&f, &data, 0.5).unwrap();
        assert!((oracle.trace - tr).abs() < 1e-12);
        let mut rng = Tolerances::default().rng();
        let chart = offset_immersion(&f, 0.5, &mut rng, 10).unwrap();
        assert!((chart.point(&u).norm() - 1.5).abs() < 1e-14);
    }

    #[test]
    fn focal_offset_rejected() {
        let f = circle_inward().unwrap();
        let mut rng = Tolerances::default().rng();
        assert!(matches!(
            offset_immersion(&f, 1.0, &mut rng, 10),
            Err(GeomError::ImmersionDegeneratesAtT { .. })
        ));
    }

    #[test]
    fn rotating_field_on_circle() {
        let f = rotating_circle().unwrap();
        let mut rng = Tolerances::default().rng();
        f.validate(&mut rng, 20, 1e-12).unwrap();
        let u = [0.4];
        let nc = normal_connection(&f, &u).unwrap();
        assert!((nc.nabla_perp_norm() - 1.0).abs() < 1e-12);
        assert!(nc.weingarten_residual() < 1e-12);
        let data = offset_data(&f, &u).unwrap();
        let t = 0.3;
        let g = offset_metric_from(&data, t).unwrap();
        let expected = (1.0 - t * data.lambdas[0]).powi(2) + t * t * data.n[(0, 0)];
        assert!((g[(0, 0)] - expected).abs() < 1e-14);
        let oracle = offset_oracle(&f, &data, t).unwrap();
        assert!((g[(0, 0)] - oracle.metric[(0, 0)]).abs() < 1e-12);
        let frames_t = offset_frames_from(&data, t).unwrap();
        for xi in &frames_t.xi {
            assert!(xi.dot(&frames_t.x[0]).abs() < 1e-12);
        }
        let tr = offset_shape_trace_from(&data, 0.2).unwrap();
        let oracle = offset_oracle(&f, &data, 0.2).unwrap();
        assert!((tr - oracle.trace).abs() < 1e-12);
    }

    #[test]
    fn frame_rotation_leaves_metric_trace_invariant() {
        let f = sphere_outward(1.0).unwrap();
        let data = offset_data(&f, &[1.2, 0.3]).unwrap();
        let q = Mat::from_row_slice(2, 2, &[0.6, -0.8, 0.8, 0.6]);
        let rot = data.rotated(&q);
        let t = 0.4;
        let a = offset_shape_trace_from(&data, t).unwrap();
        let b = offset_shape_trace_from(&rot, t).unwrap();
        assert!((a - b).abs() < 1e-13);
        let ga = offset_metric_from(&rot, t).unwrap();
        let oracle = offset_oracle(&f, &rot, t).unwrap();
        assert!((ga - oracle.metric).amax() < 1e-12);
    }
}
