//! Closed-form example immersions.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::catalog::chart::{Domain, ImmersionChart, JetMap, ScalarField};
use crate::catalog::graph_immersion;
use crate::error::{GeomError, Result};
use crate::numerics::{Dual3, Vector};

pub type Params = BTreeMap<String, String>;

pub const BUILTIN_NAMES: &[&str] = &[
    "tilted_plane",
    "flat",
    "cylinder",
    "cone",
    "catenoid",
    "helicoid",
    "round_sphere",
    "circle",
    "complex_parabola",
    "complex_line",
    "graph",
];

pub const DEFAULT_APEX_RADIUS: f64 = 0.1;

fn c(v: f64) -> Dual3 {
    Dual3::constant(v)
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(GeomError::param(name, format!("must be positive, got {v}")))
    }
}

/// Plane through the origin making angle `theta` with `e3`:
/// `(u, v) -> (u sin(theta), v, u cos(theta))`. Orthonormal coordinates.
pub fn tilted_plane(theta: f64) -> Result<ImmersionChart> {
    if !(0.0..=PI / 2.0).contains(&theta) {
        return Err(GeomError::param("theta", "must lie in [0, pi/2]"));
    }
    let (s, co) = theta.sin_cos();
    let map = JetMap::new(2, 3, move |v| {
        vec![&v[0] * s, v[1].clone(), &v[0] * co]
    });
    ImmersionChart::new(format!("tilted_plane(theta={theta})"), Domain::cube(2, 1.0), map)
}

/// Identity chart of an open cube in `R^m` (codimension zero).
pub fn flat(m: usize, half: f64) -> Result<ImmersionChart> {
    if m == 0 {
        return Err(GeomError::param("m", "must be at least 1"));
    }
    let map = JetMap::new(m, m, |v| v.to_vec());
    ImmersionChart::new(format!("flat(R{m})"), Domain::cube(m, half), map)
}

/// Circle of radius `r` in the first two coordinates of `R^ambient`.
pub fn circle(r: f64, ambient: usize) -> Result<ImmersionChart> {
    let r = positive("r", r)?;
    if ambient < 2 {
        return Err(GeomError::param("ambient", "circle needs ambient dimension >= 2"));
    }
    let map = JetMap::new(1, ambient, move |v| {
        let mut out = vec![v[0].cos() * r, v[0].sin() * r];
        out.resize(ambient, c(0.0));
        out
    });
    ImmersionChart::new(
        format!("circle(r={r})"),
        Domain::new(&[(-PI, PI)])?,
        map,
    )
}

/// Parabola `s -> (s, a s^2)` in the plane.
pub fn parabola(a: f64) -> Result<ImmersionChart> {
    let map = JetMap::new(1, 2, move |v| vec![v[0].clone(), &v[0] * &v[0] * a]);
    ImmersionChart::new(format!("parabola(a={a})"), Domain::new(&[(-1.0, 1.0)])?, map)
}

/// Cylinder over a plane curve; the ruling is the last ambient axis.
pub fn cylinder_over_curve(profile: &ImmersionChart) -> Result<ImmersionChart> {
    if profile.m() != 1 || profile.n() != 2 {
        return Err(GeomError::param("profile", "must be a plane curve"));
    }
    Ok(profile.cylinder(1.0).renamed(format!("cylinder({})", profile.name)))
}

/// Cone `(u, v) -> (u, v, k sqrt(u^2 + v^2))` on `[-2, 2]^2` minus a disc
/// of radius `apex_radius` around the apex.
pub fn cone(k: f64, apex_radius: f64) -> Result<ImmersionChart> {
    let k = positive("k", k)?;
    let apex_radius = positive("apex_radius", apex_radius)?;
    let map = JetMap::new(2, 3, move |v| {
        let r = (&v[0] * &v[0] + &v[1] * &v[1]).sqrt();
        vec![v[0].clone(), v[1].clone(), r * k]
    });
    let domain = Domain::cube(2, 2.0).excluding_ball(vec![0.0, 0.0], apex_radius);
    ImmersionChart::new(format!("cone(k={k})"), domain, map)
}

/// Catenoid `(u, v) -> (c cosh v cos u, c cosh v sin u, c v)`.
pub fn catenoid(scale: f64) -> Result<ImmersionChart> {
    let a = positive("c", scale)?;
    let map = JetMap::new(2, 3, move |v| {
        let ch = v[1].cosh() * a;
        vec![&ch * v[0].cos(), &ch * v[0].sin(), &v[1] * a]
    });
    ImmersionChart::new(
        format!("catenoid(c={a})"),
        Domain::new(&[(-PI, PI), (-1.0, 1.0)])?,
        map,
    )
}

/// Helicoid `(u, v) -> (v cos u, v sin u, c u)`.
pub fn helicoid(pitch: f64) -> Result<ImmersionChart> {
    let a = positive("c", pitch)?;
    let map = JetMap::new(2, 3, move |v| {
        vec![&v[1] * v[0].cos(), &v[1] * v[0].sin(), &v[0] * a]
    });
    ImmersionChart::new(
        format!("helicoid(c={a})"),
        Domain::new(&[(-PI, PI), (-1.0, 1.0)])?,
        map,
    )
}

/// Spherical chart `(phi, theta)`, polar caps of angle 0.3 removed.
/// `det[d_phi, d_theta, N] > 0` for the outward normal.
pub fn round_sphere(r: f64) -> Result<ImmersionChart> {
    let r = positive("r", r)?;
    let map = JetMap::new(2, 3, move |v| {
        let sp = v[0].sin() * r;
        vec![&sp * v[1].cos(), &sp * v[1].sin(), v[0].cos() * r]
    });
    ImmersionChart::new(
        format!("round_sphere(r={r})"),
        Domain::new(&[(0.3, PI - 0.3), (-PI, PI)])?,
        map,
    )
}

/// Outward unit normal field of [`round_sphere`] (independent of `r`).
pub fn sphere_outward_normal() -> JetMap {
    JetMap::new(2, 3, |v| {
        let sp = v[0].sin();
        vec![&sp * v[1].cos(), &sp * v[1].sin(), v[0].cos()]
    })
}

/// `z -> (z, z^2)` in `C^2 = R^4` with coordinates `(x1, y1, x2, y2)`.
pub fn complex_parabola() -> Result<ImmersionChart> {
    let map = JetMap::new(2, 4, |v| {
        let (a, b) = (&v[0], &v[1]);
        vec![a.clone(), b.clone(), a * a - b * b, a * b * 2.0]
    });
    ImmersionChart::new("complex_parabola", Domain::cube(2, 1.0), map)
}

/// Standard complex structure on `R^{2k}`: `(x1, y1, ...) -> (-y1, x1, ...)`.
pub fn complex_j(v: &Vector) -> Vector {
    let mut out = Vector::zeros(v.len());
    for i in (0..v.len()).step_by(2) {
        out[i] = -v[i + 1];
        out[i + 1] = v[i];
    }
    out
}

/// Complex line `a w + b J w + base` in `R^{2k}` for a unit vector `w`.
pub fn complex_line(w: &Vector, base: &Vector) -> Result<ImmersionChart> {
    let n = w.len();
    if n % 2 != 0 || n < 4 || base.len() != n {
        return Err(GeomError::param("w", "needs even ambient dimension >= 4"));
    }
    let norm = w.norm();
    let w = positive("w", norm).map(|nrm| w / nrm)?;
    let jw = complex_j(&w);
    let base = base.clone();
    let map = JetMap::new(2, n, move |v| {
        (0..n)
            .map(|i| &v[0] * w[i] + &v[1] * jw[i] + base[i])
            .collect()
    });
    ImmersionChart::new("complex_line", Domain::cube(2, 1.0), map)
}

/// Graph of a named function over the flat chart of `R^2`:
/// `linear` (slope `k` along `u1`), `radial` (`k |u|`) or `square` (`u1^2`).
pub fn flat_graph(f: &str, k: f64) -> Result<ImmersionChart> {
    let (field, apex) = match f {
        "linear" => (ScalarField::linear(vec![k, 0.0], 0.0), false),
        "radial" => (ScalarField::radial(vec![0.0, 0.0], k), true),
        "square" => (ScalarField::square(0), false),
        other => {
            return Err(GeomError::param(
                "f",
                format!("unknown graph function `{other}` (linear|radial|square)"),
            ))
        }
    };
    let half = if apex { 2.0 } else { 1.0 };
    let mut base = flat(2, half)?;
    if apex {
        base.domain = base
            .domain
            .clone()
            .excluding_ball(vec![0.0, 0.0], DEFAULT_APEX_RADIUS);
    }
    Ok(graph_immersion(&base, &field)?.renamed(format!("graph(f={f}, k={k})")))
}

fn num(params: &Params, key: &str, default: f64) -> Result<f64> {
    match params.get(key) {
        None => Ok(default),
        Some(s) => s
            .trim()
            .parse::<f64>()
            .map_err(|_| GeomError::param(key, format!("`{s}` is not a number"))),
    }
}

fn vector_param(params: &Params, key: &str, default: &[f64]) -> Result<Vector> {
    match params.get(key) {
        None => Ok(Vector::from_column_slice(default)),
        Some(s) => {
            let vals: std::result::Result<Vec<f64>, _> =
                s.split(';').map(|t| t.trim().parse::<f64>()).collect();
            vals.map(Vector::from_vec)
                .map_err(|_| GeomError::param(key, format!("`{s}` is not a ;-separated vector")))
        }
    }
}

/// Looks up a catalog chart by name.
pub fn builtin(name: &str, params: &Params) -> Result<ImmersionChart> {
    match name {
        "tilted_plane" => tilted_plane(num(params, "theta", PI / 6.0)?),
        "flat" => {
            let m = num(params, "m", 2.0)?;
            if m < 1.0 || m.fract() != 0.0 {
                return Err(GeomError::param("m", "must be a positive integer"));
            }
            flat(m as usize, num(params, "half", 1.0)?)
        }
        "cylinder" => {
            let profile = match params.get("profile").map(String::as_str) {
                None | Some("circle") => circle(num(params, "r", 1.0)?, 2)?,
                Some("parabola") => parabola(num(params, "a", 1.0)?)?,
                Some(other) => {
                    return Err(GeomError::param(
                        "profile",
                        format!("unknown profile `{other}` (circle|parabola)"),
                    ))
                }
            };
            cylinder_over_curve(&profile)
        }
        "cone" => cone(
            num(params, "k", 1.0)?,
            num(params, "apex_radius", DEFAULT_APEX_RADIUS)?,
        ),
        "catenoid" => catenoid(num(params, "c", 1.0)?),
        "helicoid" => helicoid(num(params, "c", 1.0)?),
        "round_sphere" => round_sphere(num(params, "r", 1.0)?),
        "circle" => {
            let n = num(params, "n", 3.0)?;
            if n < 2.0 || n.fract() != 0.0 {
                return Err(GeomError::param("n", "must be an integer >= 2"));
            }
            circle(num(params, "r", 1.0)?, n as usize)
        }
        "complex_parabola" => complex_parabola(),
        "complex_line" => {
            let w = vector_param(params, "w", &[1.0, 0.0, 1.0, 0.0])?;
            let base = vector_param(params, "base", &vec![0.0; w.len()])?;
            complex_line(&w, &base)
        }
        "graph" => flat_graph(
            params.get("f").map(String::as_str).unwrap_or("radial"),
            num(params, "k", 1.0)?,
        ),
        other => Err(GeomError::UnknownChart(other.to_string())),
    }
}

/// Parses `name` or `name:key=value,key=value` and builds the chart.
pub fn parse_selector(selector: &str) -> Result<ImmersionChart> {
    let (name, params) = split_selector(selector)?;
    builtin(&name, &params)
}

pub fn split_selector(selector: &str) -> Result<(String, Params)> {
    let mut parts = selector.splitn(2, ':');
    let name = parts.next().unwrap_or_default().trim().to_string();
    let mut params = Params::new();
    if let Some(rest) = parts.next() {
        for kv in rest.split(',').filter(|s| !s.trim().is_empty()) {
            let (k, v) = kv.split_once('=').ok_or_else(|| {
                GeomError::param(kv, "expected key=value in chart selector")
            })?;
            params.insert(k.trim().to_string(), v.trim().to_string());
        }
    }
    Ok((name, params))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cone_chart_shape() {
        let ch = cone(1.0, 0.1).unwrap();
        assert_eq!((ch.m(), ch.n()), (2, 3));
        let p = ch.point(&[3.0_f64.sqrt() / 2.0, 0.5]);
        assert!((p[2] - 1.0).abs() < 1e-15);
        assert!(!ch.domain.contains(&[0.05, 0.0], 0.0));
    }

    #[test]
    fn complex_parabola_point() {
        let p = complex_parabola().unwrap().point(&[1.0, 0.0]);
        assert_eq!(p.as_slice(), &[1.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn sphere_rank_away_from_poles() {
        let s = round_sphere(1.0).unwrap();
        let mut rng = crate::numerics::Tolerances::default().rng();
        s.check_immersion(&mut rng, 50, 1e-8).unwrap();
    }

    #[test]
    fn invalid_params() {
        assert!(matches!(round_sphere(0.0), Err(GeomError::InvalidParam { .. })));
        assert!(matches!(
            parse_selector("klein_bottle"),
            Err(GeomError::UnknownChart(_))
        ));
        assert!(parse_selector("cone:k=abc").is_err());
    }

    #[test]
    fn selector_parsing() {
        let ch = parse_selector("cone:k=2,apex_radius=0.2").unwrap();
        assert!(ch.name.contains("k=2"));
        let cyl = parse_selector("cylinder:profile=parabola,a=0.5").unwrap();
        assert_eq!((cyl.m(), cyl.n()), (2, 3));
    }
}
