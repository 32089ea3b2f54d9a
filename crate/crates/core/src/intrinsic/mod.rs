//! Riemannian geometry of metrics given in coordinates: Levi-Civita
//! connection, curvature, gradient, Hessian and Laplacian, the comparison
//! between `g` and `h = g + df ⊗ df`, and Sol geometry.
//!
//! Curvature convention: `R(X,Y)Z = -∇_X∇_Y Z + ∇_Y∇_X Z + ∇_[X,Y] Z`,
//! the negative of the more common one, so that
//! `Ric(X, Y) = sum_j <R(X, X_j) Y, X_j>` is the usual Ricci tensor.

mod comparison;
mod curvature;
pub mod sol;

use std::fmt;
use std::sync::Arc;

use crate::catalog::{Domain, ImmersionChart};
use crate::error::{GeomError, Result};
use crate::numerics::{sym_eig, Dual3, Mat};

pub use comparison::{
    comparison_report, eikonal_check, eikonal_gradient, frame_form_residual, helix_metric,
    hessian_along_gradient, ricci_gradient_check, ComparisonReport, EikonalReport, EIKONAL_TOL,
};
pub use curvature::{
    christoffels, gradient, hessian, laplacian, ricci, riemann, Christoffels, CurvaturePack,
};
pub use sol::{sol_metric, sol_verification};

/// Metric components with first and second partials at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricJet {
    pub g: Mat,
    /// `dg[c] = d_c g`.
    pub dg: Vec<Mat>,
    /// `ddg[c][d] = d_c d_d g`.
    pub ddg: Vec<Vec<Mat>>,
}

impl MetricJet {
    pub fn m(&self) -> usize {
        self.g.nrows()
    }
}

type JetFn = Arc<dyn Fn(&[f64]) -> MetricJet + Send + Sync>;

/// A Riemannian metric on a coordinate box.
#[derive(Clone)]
pub struct MetricChart {
    pub name: String,
    pub domain: Domain,
    jet: JetFn,
}

impl fmt::Debug for MetricChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MetricChart({}, m = {})", self.name, self.m())
    }
}

impl MetricChart {
    pub fn from_jet_fn<F>(name: impl Into<String>, domain: Domain, jet: F) -> Self
    where
        F: Fn(&[f64]) -> MetricJet + Send + Sync + 'static,
    {
        MetricChart {
            name: name.into(),
            domain,
            jet: Arc::new(jet),
        }
    }

    /// Metric from a dual-number closure returning the `m * m` components
    /// in row-major order.
    pub fn from_duals<F>(name: impl Into<String>, domain: Domain, f: F) -> Self
    where
        F: Fn(&[Dual3]) -> Vec<Dual3> + Send + Sync + 'static,
    {
        let m = domain.dim();
        MetricChart::from_jet_fn(name, domain, move |u| {
            let comps = f(&Dual3::variables(u, 2));
            assert_eq!(comps.len(), m * m, "metric closure must return m*m components");
            let at = |i: usize, j: usize| &comps[i * m + j];
            MetricJet {
                g: Mat::from_fn(m, m, |i, j| at(i, j).value()),
                dg: (0..m)
                    .map(|c| Mat::from_fn(m, m, |i, j| at(i, j).d1(c)))
                    .collect(),
                ddg: (0..m)
                    .map(|c| {
                        (0..m)
                            .map(|d| Mat::from_fn(m, m, |i, j| at(i, j).d2(c, d)))
                            .collect()
                    })
                    .collect(),
            }
        })
    }

    /// Euclidean metric on the cube `[-half, half]^m`.
    pub fn flat(m: usize, half: f64) -> Self {
        MetricChart::from_jet_fn(format!("flat{m}"), Domain::cube(m, half), move |_| MetricJet {
            g: Mat::identity(m, m),
            dg: vec![Mat::zeros(m, m); m],
            ddg: vec![vec![Mat::zeros(m, m); m]; m],
        })
    }

    /// `dr^2 + r^2 dθ^2` on `r ∈ [r_lo, r_hi]`, `θ ∈ [-π, π]`.
    pub fn polar(r_lo: f64, r_hi: f64) -> Result<Self> {
        let domain = Domain::new(&[(r_lo, r_hi), (-std::f64::consts::PI, std::f64::consts::PI)])?;
        Ok(MetricChart::from_duals("polar", domain, |v| {
            vec![
                Dual3::constant(1.0),
                Dual3::constant(0.0),
                Dual3::constant(0.0),
                &v[0] * &v[0],
            ]
        }))
    }

    /// First fundamental form of an immersion, with partials from the
    /// chart's third jet.
    pub fn induced(chart: &ImmersionChart) -> Self {
        let c = chart.clone();
        MetricChart::from_jet_fn(format!("induced({})", chart.name), chart.domain.clone(), move |u| {
            let jet = c.jet3(u);
            let j2 = &jet.jet2;
            let m = j2.m();
            let col = |a: usize| j2.jacobian.column(a).clone_owned();
            let second = |a: usize, b: usize| j2.second(a, b);
            let g = j2.jacobian.transpose() * &j2.jacobian;
            let dg = (0..m)
                .map(|c| {
                    Mat::from_fn(m, m, |a, b| {
                        second(a, c).dot(&col(b)) + col(a).dot(&second(b, c))
                    })
                })
                .collect();
            let ddg = (0..m)
                .map(|c| {
                    (0..m)
                        .map(|d| {
                            Mat::from_fn(m, m, |a, b| {
                                jet.third(a, c, d).dot(&col(b))
                                    + second(a, c).dot(&second(b, d))
                                    + second(a, d).dot(&second(b, c))
                                    + col(a).dot(&jet.third(b, c, d))
                            })
                        })
                        .collect()
                })
                .collect();
            MetricJet { g, dg, ddg }
        })
    }

    /// Pullback under the affine change `u = a v + shift`. The new domain
    /// is the cube `[-half, half]^m` in `v`.
    pub fn linear_pullback(&self, a: &Mat, shift: &[f64], half: f64) -> Self {
        let inner = self.clone();
        let a = a.clone();
        let shift = shift.to_vec();
        let m = a.nrows();
        MetricChart::from_jet_fn(
            format!("pullback({})", self.name),
            Domain::cube(m, half),
            move |v| {
                let u: Vec<f64> = (0..m)
                    .map(|i| shift[i] + (0..m).map(|j| a[(i, j)] * v[j]).sum::<f64>())
                    .collect();
                let jet = inner.jet(&u);
                let sandwich = |x: &Mat| a.transpose() * x * &a;
                let dg: Vec<Mat> = (0..m)
                    .map(|c| {
                        let mut acc = Mat::zeros(m, m);
                        for (k, d) in jet.dg.iter().enumerate() {
                            acc += d * a[(k, c)];
                        }
                        sandwich(&acc)
                    })
                    .collect();
                let ddg = (0..m)
                    .map(|c| {
                        (0..m)
                            .map(|d| {
                                let mut acc = Mat::zeros(m, m);
                                for k in 0..m {
                                    for l in 0..m {
                                        acc += &jet.ddg[k][l] * (a[(k, c)] * a[(l, d)]);
                                    }
                                }
                                sandwich(&acc)
                            })
                            .collect()
                    })
                    .collect();
                MetricJet {
                    g: sandwich(&jet.g),
                    dg,
                    ddg,
                }
            },
        )
    }

    pub fn m(&self) -> usize {
        self.domain.dim()
    }

    pub fn jet(&self, u: &[f64]) -> MetricJet {
        (self.jet)(u)
    }

    pub fn g(&self, u: &[f64]) -> Mat {
        self.jet(u).g
    }

    /// Checks symmetry and positive definiteness at `u`.
    pub fn validate_at(&self, u: &[f64]) -> Result<MetricJet> {
        let jet = self.jet(u);
        let (vals, _) = sym_eig(&jet.g)?;
        let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
        if !(min > 0.0) {
            return Err(GeomError::NonPositiveDefinite { min_eigenvalue: min });
        }
        Ok(jet)
    }
}
