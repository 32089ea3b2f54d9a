use crate::error::{GeomError, Result};
use crate::numerics::dual::Dual3;
use crate::numerics::linalg::{Mat, Vector};

/// Value, first and second partials of a map `R^m -> R^n` at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet2 {
    pub value: Vector,
    /// `n x m`, entry `(k, a)` is `d value_k / d u_a`.
    pub jacobian: Mat,
    /// One symmetric `m x m` matrix per output component.
    pub hessians: Vec<Mat>,
}

impl Jet2 {
    pub fn m(&self) -> usize {
        self.jacobian.ncols()
    }

    pub fn n(&self) -> usize {
        self.jacobian.nrows()
    }

    /// Ambient vector `d^2 value / du_a du_b`.
    pub fn second(&self, a: usize, b: usize) -> Vector {
        Vector::from_iterator(self.n(), self.hessians.iter().map(|h| h[(a, b)]))
    }

    /// Collects a jet from dual outputs tracked to at least second order.
    pub fn from_duals(outputs: &[Dual3], m: usize) -> Jet2 {
        let n = outputs.len();
        let value = Vector::from_iterator(n, outputs.iter().map(Dual3::value));
        let jacobian = Mat::from_fn(n, m, |k, a| outputs[k].d1(a));
        let hessians = outputs
            .iter()
            .map(|o| Mat::from_fn(m, m, |a, b| o.d2(a, b)))
            .collect();
        Jet2 {
            value,
            jacobian,
            hessians,
        }
    }
}

/// A [`Jet2`] extended with third partials.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet3 {
    pub jet2: Jet2,
    /// `thirds[k][(a * m + b) * m + c]`.
    pub thirds: Vec<Vec<f64>>,
}

impl Jet3 {
    pub fn from_duals(outputs: &[Dual3], m: usize) -> Jet3 {
        let jet2 = Jet2::from_duals(outputs, m);
        let thirds = outputs
            .iter()
            .map(|o| {
                let mut t = vec![0.0; m * m * m];
                for a in 0..m {
                    for b in 0..m {
                        for c in 0..m {
                            t[(a * m + b) * m + c] = o.d3(a, b, c);
                        }
                    }
                }
                t
            })
            .collect();
        Jet3 { jet2, thirds }
    }

    pub fn third(&self, a: usize, b: usize, c: usize) -> Vector {
        let m = self.jet2.m();
        Vector::from_iterator(
            self.thirds.len(),
            self.thirds.iter().map(|t| t[(a * m + b) * m + c]),
        )
    }
}

/// Central-difference jet of a black-box map.
///
/// First partials use `step`; second partials use `10 * step` so that the
/// `eps / h^2` rounding term stays near 1e-8 for unit-scale values. Steps
/// scale with `max(1, |u_a|)` per coordinate.
pub fn fd_jet2<F>(map: F, u: &[f64], step: f64) -> Result<Jet2>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    if !(step > 0.0) {
        return Err(GeomError::param("step", "finite-difference step must be positive"));
    }
    let m = u.len();
    let center = map(u)?;
    let n = center.len();
    let eval = |shift: &[(usize, f64)]| -> Result<Vector> {
        let mut p = u.to_vec();
        for &(i, h) in shift {
            p[i] += h;
        }
        let out = map(&p)?;
        if out.len() != n {
            return Err(GeomError::Evaluation(format!(
                "map returned {} components at stencil point, expected {}",
                out.len(),
                n
            )));
        }
        Ok(Vector::from_vec(out))
    };
    let h1: Vec<f64> = u.iter().map(|x| step * x.abs().max(1.0)).collect();
    let h2: Vec<f64> = h1.iter().map(|h| 10.0 * h).collect();
    let c = Vector::from_vec(center);

    let mut jacobian = Mat::zeros(n, m);
    for a in 0..m {
        let fp = eval(&[(a, h1[a])])?;
        let fm = eval(&[(a, -h1[a])])?;
        jacobian.set_column(a, &((fp - fm) / (2.0 * h1[a])));
    }

    let mut hessians = vec![Mat::zeros(m, m); n];
    for a in 0..m {
        let fp = eval(&[(a, h2[a])])?;
        let fm = eval(&[(a, -h2[a])])?;
        let d = (fp - 2.0 * &c + fm) / (h2[a] * h2[a]);
        for k in 0..n {
            hessians[k][(a, a)] = d[k];
        }
        for b in (a + 1)..m {
            let fpp = eval(&[(a, h2[a]), (b, h2[b])])?;
            let fpm = eval(&[(a, h2[a]), (b, -h2[b])])?;
            let fmp = eval(&[(a, -h2[a]), (b, h2[b])])?;
            let fmm = eval(&[(a, -h2[a]), (b, -h2[b])])?;
            let d = (fpp - fpm - fmp + fmm) / (4.0 * h2[a] * h2[b]);
            for k in 0..n {
                hessians[k][(a, b)] = d[k];
                hessians[k][(b, a)] = d[k];
            }
        }
    }
    Ok(Jet2 {
        value: c,
        jacobian,
        hessians,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_map_jet() {
        let a = Mat::from_row_slice(2, 3, &[1.0, -2.0, 0.5, 3.0, 0.0, 1.0]);
        let jet = fd_jet2(
            |u| {
                let v = &a * Vector::from_column_slice(u);
                Ok(v.iter().cloned().collect())
            },
            &[0.3, -1.2, 2.0],
            1e-5,
        )
        .unwrap();
        assert!((&jet.jacobian - &a).norm() < 1e-9);
        assert!(jet.hessians.iter().all(|h| h.norm() < 1e-6));
    }

    #[test]
    fn quadratic_map_jet() {
        // u -> (u1^2, u1 u2) at (1, 1)
        let jet = fd_jet2(|u| Ok(vec![u[0] * u[0], u[0] * u[1]]), &[1.0, 1.0], 1e-5).unwrap();
        let expected_j = Mat::from_row_slice(2, 2, &[2.0, 0.0, 1.0, 1.0]);
        assert!((&jet.jacobian - expected_j).norm() < 1e-8);
        let h0 = Mat::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.0]);
        let h1 = Mat::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!((&jet.hessians[0] - h0).norm() < 1e-6);
        assert!((&jet.hessians[1] - h1).norm() < 1e-6);
    }

    #[test]
    fn evaluation_failure_propagates() {
        let r = fd_jet2(
            |u| {
                if u[0] > 1.0 {
                    Err(GeomError::Evaluation("outside".into()))
                } else {
                    Ok(vec![u[0]])
                }
            },
            &[1.0],
            1e-5,
        );
        assert!(matches!(r, Err(GeomError::Evaluation(_))));
    }
}
