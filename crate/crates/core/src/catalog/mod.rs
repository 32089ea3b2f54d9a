//! Parametrised immersions: builtin examples, polynomial files, and the
//! graph and slice constructions.

pub mod builtin;
pub mod chart;
pub mod poly;

use std::sync::Arc;

pub use builtin::{builtin, parse_selector, split_selector, Params, BUILTIN_NAMES};
pub use chart::{
    Domain, DualMap, GraphInfo, ImmersionChart, JetMap, ScalarField, ScalarJet, VectorField,
};
pub use poly::{load_poly, PolySpec, Term};

use crate::error::{GeomError, Result};
use crate::numerics::Rng;

/// Graph `u -> (base(u), f(u))` in `R^{n+1}`; the new last axis is the
/// helix direction.
pub fn graph_immersion(base: &ImmersionChart, f: &ScalarField) -> Result<ImmersionChart> {
    let inner = base.map.clone();
    let field = f.clone();
    let (m, n) = (base.m(), base.n());
    let map = JetMap::new(m, n + 1, move |v| {
        let mut out = inner.apply(v);
        out.push(field.apply(v));
        out
    });
    let mut chart = ImmersionChart::new(
        format!("graph({} | {})", base.name, f.name),
        base.domain.clone(),
        map,
    )?;
    chart.graph = Some(Arc::new(GraphInfo {
        base: base.clone(),
        f: f.clone(),
    }));
    Ok(chart)
}

/// Chart `u -> L(u) + s T(u)` for a unit vector field `T` along `L`.
///
/// `T` is checked to be unit within `tol` at `checks` seeded samples.
pub fn slice_extension(
    slice: &ImmersionChart,
    field: &VectorField,
    s: f64,
    rng: &mut Rng,
    checks: usize,
    tol: f64,
) -> Result<ImmersionChart> {
    if field.m() != slice.m() || field.n() != slice.n() {
        return Err(GeomError::DimensionMismatch(format!(
            "field is R^{} -> R^{}, slice is R^{} -> R^{}",
            field.m(),
            field.n(),
            slice.m(),
            slice.n()
        )));
    }
    for u in slice.samples(rng, checks) {
        let norm = field.value(&u).norm();
        if (norm - 1.0).abs() > tol {
            return Err(GeomError::contract(format!(
                "slice field is not unit at {u:?} (|T| = {norm})"
            )));
        }
    }
    ImmersionChart::new(
        format!("slice({}, s={s})", slice.name),
        slice.domain.clone(),
        slice.map.add_scaled(field, s),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{Dual3, Tolerances, Vector};

    #[test]
    fn graph_projects_back_to_base() {
        let base = builtin::flat(2, 1.0).unwrap();
        let g = graph_immersion(&base, &ScalarField::square(0)).unwrap();
        let u = [0.3, -0.2];
        let p = g.point(&u);
        assert_eq!(p.rows(0, 2), base.point(&u).rows(0, 2));
        assert!((p[2] - 0.09).abs() < 1e-16);
    }

    #[test]
    fn slice_zero_is_identity() {
        let l = builtin::circle(1.0, 3).unwrap();
        let t = JetMap::constant(1, Vector::from_vec(vec![0.0, 0.0, 1.0]));
        let mut rng = Tolerances::default().rng();
        let e = slice_extension(&l, &t, 0.0, &mut rng, 10, 1e-9).unwrap();
        assert_eq!(e.point(&[0.4]), l.point(&[0.4]));
    }

    #[test]
    fn non_unit_field_rejected() {
        let l = builtin::circle(1.0, 3).unwrap();
        let t = JetMap::new(1, 3, |v| vec![v[0].clone(), Dual3::constant(0.0), Dual3::constant(1.0)]);
        let mut rng = Tolerances::default().rng();
        assert!(matches!(
            slice_extension(&l, &t, 1.0, &mut rng, 10, 1e-9),
            Err(GeomError::ContractViolation(_))
        ));
    }
}
