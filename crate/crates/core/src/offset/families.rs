//! Seeded normal fields of constant length used by the offset suites.

use rand::Rng as _;

use crate::catalog::builtin::{self, sphere_outward_normal};
use crate::catalog::{ImmersionChart, JetMap, ScalarField};
use crate::error::Result;
use crate::extrinsic::frames;
use crate::numerics::{Dual3, Rng, Vector};
use crate::offset::{valid_t_radius, NormalField};

fn zero() -> Dual3 {
    Dual3::constant(0.0)
}

fn padded(field: JetMap, n: usize) -> JetMap {
    let m = field.m();
    JetMap::new(m, n, move |v| {
        let mut out = field.apply(v);
        out.resize(n, zero());
        out
    })
}

fn axis(m: usize, n: usize, i: usize) -> JetMap {
    JetMap::constant(m, Vector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 }))
}

/// `(cos s, sin s, 0, ...)` on a circle chart.
fn radial(n: usize) -> JetMap {
    JetMap::new(1, n, move |v| {
        let mut out = vec![v[0].cos(), v[0].sin()];
        out.resize(n, zero());
        out
    })
}

/// Unit normal `(cos u, sin u, -sinh v) / cosh v` of the catenoid.
fn catenoid_normal(n: usize) -> JetMap {
    JetMap::new(2, n, move |v| {
        let ch = v[1].cosh().recip();
        let mut out = vec![v[0].cos() * &ch, v[0].sin() * &ch, -(v[1].sinh() * &ch)];
        out.resize(n, zero());
        out
    })
}

/// `cos β ν1 + sin β ν2` for orthonormal normal fields `ν1`, `ν2`.
pub fn mixed(
    name: impl Into<String>,
    base: ImmersionChart,
    nu1: JetMap,
    nu2: JetMap,
    beta: ScalarField,
) -> Result<NormalField> {
    let m = base.m();
    let n = base.n();
    let eta = JetMap::new(m, n, move |v| {
        let b = beta.apply(v);
        let (c, s) = (b.cos(), b.sin());
        nu1.apply(v)
            .into_iter()
            .zip(nu2.apply(v))
            .map(|(x, y)| x * &c + y * &s)
            .collect()
    });
    NormalField::new(name, base, eta, 1.0)
}

pub fn sphere_outward(r: f64) -> Result<NormalField> {
    NormalField::new("outward", builtin::round_sphere(r)?, sphere_outward_normal(), 1.0)
}

/// Inward unit normal of the unit circle in `R^3`; `t = 1` is focal.
pub fn circle_inward() -> Result<NormalField> {
    let eta = JetMap::new(1, 3, |v| vec![-v[0].cos(), -v[0].sin(), zero()]);
    NormalField::new("inward", builtin::circle(1.0, 3)?, eta, 1.0)
}

/// `η = cos s e3 + sin s (cos s, sin s, 0)` on the unit circle in `R^3`.
pub fn rotating_circle() -> Result<NormalField> {
    mixed(
        "rotating",
        builtin::circle(1.0, 3)?,
        axis(1, 3, 2),
        radial(3),
        ScalarField::coordinate(0),
    )
}

/// Flat strip in `R^4` with `η = cos u e3 + sin u e4`.
pub fn rotating_strip() -> Result<NormalField> {
    mixed(
        "rotating",
        builtin::flat(2, 1.0)?.embed(4),
        axis(2, 4, 2),
        axis(2, 4, 3),
        ScalarField::coordinate(0),
    )
}

pub fn parallel_planes() -> Result<NormalField> {
    NormalField::constant(
        builtin::flat(2, 1.0)?.embed(3),
        Vector::from_vec(vec![0.0, 0.0, 1.0]),
    )
}

/// A complex line in `C^2` with a constant unit normal.
pub fn parallel_complex_lines() -> Result<NormalField> {
    let w = Vector::from_vec(vec![0.6, 0.0, 0.0, 0.8]);
    let base = builtin::complex_line(&w, &Vector::zeros(4))?;
    let nu = frames(&base, &base.domain.center())?.normal[0].clone();
    NormalField::constant(base, nu)
}

/// Catenoid in `R^4` with the constant normal `e4`.
pub fn catenoid_constant() -> Result<NormalField> {
    NormalField::constant(
        builtin::catenoid(1.0)?.embed(4),
        Vector::from_vec(vec![0.0, 0.0, 0.0, 1.0]),
    )
}

/// `β(u) = a + b·u + u^T C u` with seeded coefficients in `[-1, 1]`.
pub fn random_quadratic(rng: &mut Rng, m: usize) -> ScalarField {
    let a: f64 = rng.random_range(-1.0..1.0);
    let b: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
    let c: Vec<f64> = (0..m * m).map(|_| rng.random_range(-0.5..0.5)).collect();
    ScalarField::new("quadratic", move |v| {
        let mut acc = Dual3::constant(a);
        for i in 0..m {
            acc = acc + &v[i] * b[i];
            for j in 0..m {
                acc = acc + &v[i] * &v[j] * c[i * m + j];
            }
        }
        acc
    })
}

/// Base charts with an orthonormal pair of normal fields to mix.
const FAMILIES: [&str; 5] = ["circle@R3", "sphere@R4", "plane@R4", "catenoid@R4", "cylinder@R4"];

fn family(index: usize, beta: ScalarField) -> Result<NormalField> {
    let name = FAMILIES[index % FAMILIES.len()];
    let (base, nu1, nu2) = match index % FAMILIES.len() {
        0 => (builtin::circle(1.0, 3)?, radial(3), axis(1, 3, 2)),
        1 => (
            builtin::round_sphere(1.0)?.embed(4),
            padded(sphere_outward_normal(), 4),
            axis(2, 4, 3),
        ),
        2 => (builtin::flat(2, 1.0)?.embed(4), axis(2, 4, 2), axis(2, 4, 3)),
        3 => (builtin::catenoid(1.0)?.embed(4), catenoid_normal(4), axis(2, 4, 3)),
        _ => {
            let cyl = builtin::circle(1.0, 2)?.cylinder(1.0).embed(4);
            let rad = JetMap::new(2, 4, |v| vec![v[0].cos(), v[0].sin(), zero(), zero()]);
            (cyl, rad, axis(2, 4, 3))
        }
    };
    mixed(format!("{name}/{}", beta.name), base, nu1, nu2, beta)
}

/// `count` seeded fields cycling through the mixing families, each with a
/// random quadratic angle `β`.
pub fn offset_corpus(rng: &mut Rng, count: usize) -> Result<Vec<NormalField>> {
    (0..count)
        .map(|i| {
            let m = if i % FAMILIES.len() == 0 { 1 } else { 2 };
            let beta = random_quadratic(rng, m);
            family(i, beta)
        })
        .collect()
}

/// Fields for the constancy corollary: constant ones (whose offsets are
/// minimal) and non-constant ones over minimal and non-minimal bases.
pub fn corollary_corpus(rng: &mut Rng) -> Result<Vec<NormalField>> {
    let mut out = vec![
        parallel_planes()?,
        parallel_complex_lines()?,
        catenoid_constant()?,
        rotating_strip()?,
        rotating_circle()?,
        sphere_outward(1.0)?,
    ];
    out.extend(offset_corpus(rng, 10)?);
    Ok(out)
}

/// `t_max · {-1, -0.5, 0.25, 0.5, 1}` with `t_max = 0.5 min(1, 1/max|λ|)`.
pub fn t_grid_for(field: &NormalField, rng: &mut Rng, samples: usize) -> Result<Vec<f64>> {
    let t_max = 0.5 * valid_t_radius(field, rng, samples)?.min(1.0);
    Ok([-1.0, -0.5, 0.25, 0.5, 1.0].iter().map(|s| s * t_max).collect())
}
