use crate::catalog::{ScalarField, ScalarJet};
use crate::error::Result;
use crate::intrinsic::{MetricChart, MetricJet};
use crate::numerics::{inv, Mat, Vector};

/// Christoffel symbols and their first partials at a point.
#[derive(Debug, Clone)]
pub struct Christoffels {
    pub g: Mat,
    pub g_inv: Mat,
    /// `gamma[k][(i, j)] = Γ^k_ij`.
    pub gamma: Vec<Mat>,
    /// `dgamma[c][k][(i, j)] = d_c Γ^k_ij`.
    pub dgamma: Vec<Vec<Mat>>,
}

impl Christoffels {
    pub fn m(&self) -> usize {
        self.g.nrows()
    }

    /// `<∇_{d_i} d_j, d_k>`, which Koszul's formula gives as
    /// `(d_i g_jk + d_j g_ik - d_k g_ij) / 2`.
    pub fn first_kind(&self, i: usize, j: usize, k: usize) -> f64 {
        (0..self.m()).map(|l| self.g[(k, l)] * self.gamma[l][(i, j)]).sum()
    }

    /// `∇_X Y` for constant-coefficient fields `X`, `Y`.
    pub fn covariant(&self, x: &Vector, y: &Vector) -> Vector {
        Vector::from_fn(self.m(), |k, _| (x.transpose() * &self.gamma[k] * y)[(0, 0)])
    }
}

fn first_kind_raw(jet: &MetricJet, i: usize, j: usize, l: usize) -> f64 {
    0.5 * (jet.dg[i][(l, j)] + jet.dg[j][(l, i)] - jet.dg[l][(i, j)])
}

fn first_kind_deriv(jet: &MetricJet, c: usize, i: usize, j: usize, l: usize) -> f64 {
    0.5 * (jet.ddg[c][i][(l, j)] + jet.ddg[c][j][(l, i)] - jet.ddg[c][l][(i, j)])
}

pub(crate) fn christoffels_from(jet: &MetricJet) -> Result<Christoffels> {
    let m = jet.m();
    let g_inv = inv(&jet.g)?;
    let gamma: Vec<Mat> = (0..m)
        .map(|k| {
            Mat::from_fn(m, m, |i, j| {
                (0..m).map(|l| g_inv[(k, l)] * first_kind_raw(jet, i, j, l)).sum()
            })
        })
        .collect();
    let dg_inv: Vec<Mat> = jet.dg.iter().map(|d| -(&g_inv * d * &g_inv)).collect();
    let dgamma = (0..m)
        .map(|c| {
            (0..m)
                .map(|k| {
                    Mat::from_fn(m, m, |i, j| {
                        (0..m)
                            .map(|l| {
                                dg_inv[c][(k, l)] * first_kind_raw(jet, i, j, l)
                                    + g_inv[(k, l)] * first_kind_deriv(jet, c, i, j, l)
                            })
                            .sum()
                    })
                })
                .collect()
        })
        .collect();
    Ok(Christoffels {
        g: jet.g.clone(),
        g_inv,
        gamma,
        dgamma,
    })
}

pub fn christoffels(metric: &MetricChart, u: &[f64]) -> Result<Christoffels> {
    christoffels_from(&metric.validate_at(u)?)
}

/// Connection, full curvature tensor and Ricci tensor at a point.
#[derive(Debug, Clone)]
pub struct CurvaturePack {
    pub christoffels: Christoffels,
    /// `up[((i*m + j)*m + k)*m + l]`: `d_l` component of `R(d_i, d_j) d_k`.
    up: Vec<f64>,
    /// `low[((i*m + j)*m + k)*m + l] = <R(d_i, d_j) d_k, d_l>`.
    low: Vec<f64>,
    pub ricci: Mat,
    /// Largest `|R(X,Y)Z + R(Y,Z)X + R(Z,X)Y|` over coordinate fields.
    pub bianchi_residual: f64,
}

impl CurvaturePack {
    pub fn m(&self) -> usize {
        self.ricci.nrows()
    }

    fn idx(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        let m = self.m();
        ((i * m + j) * m + k) * m + l
    }

    /// `d_l` component of `R(d_i, d_j) d_k`.
    pub fn r_up(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.up[self.idx(i, j, k, l)]
    }

    /// `<R(d_i, d_j) d_k, d_l>`.
    pub fn r(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.low[self.idx(i, j, k, l)]
    }

    /// `<R(X, Y) Z, W>` for coordinate-component vectors.
    pub fn r_on(&self, x: &Vector, y: &Vector, z: &Vector, w: &Vector) -> f64 {
        let m = self.m();
        let mut s = 0.0;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    for l in 0..m {
                        s += self.r(i, j, k, l) * x[i] * y[j] * z[k] * w[l];
                    }
                }
            }
        }
        s
    }

    /// `Ric(X, X)`.
    pub fn ricci_on(&self, x: &Vector) -> f64 {
        (x.transpose() * &self.ricci * x)[(0, 0)]
    }

    /// Largest deviation from the pair symmetries
    /// `R_ijkl = -R_jikl = -R_ijlk = R_klij`.
    pub fn symmetry_residual(&self) -> f64 {
        let m = self.m();
        let mut worst = 0.0_f64;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    for l in 0..m {
                        let r = self.r(i, j, k, l);
                        worst = worst
                            .max((r + self.r(j, i, k, l)).abs())
                            .max((r + self.r(i, j, l, k)).abs())
                            .max((r - self.r(k, l, i, j)).abs());
                    }
                }
            }
        }
        worst
    }
}

pub(crate) fn curvature_from(jet: &MetricJet) -> Result<CurvaturePack> {
    let ch = christoffels_from(jet)?;
    let m = jet.m();
    let idx = |i: usize, j: usize, k: usize, l: usize| ((i * m + j) * m + k) * m + l;
    let mut up = vec![0.0; m * m * m * m];
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    let mut std = ch.dgamma[i][l][(j, k)] - ch.dgamma[j][l][(i, k)];
                    for p in 0..m {
                        std += ch.gamma[l][(i, p)] * ch.gamma[p][(j, k)]
                            - ch.gamma[l][(j, p)] * ch.gamma[p][(i, k)];
                    }
                    up[idx(i, j, k, l)] = -std;
                }
            }
        }
    }
    let mut low = vec![0.0; m * m * m * m];
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    low[idx(i, j, k, l)] = (0..m).map(|p| up[idx(i, j, k, p)] * jet.g[(p, l)]).sum();
                }
            }
        }
    }
    let ricci = Mat::from_fn(m, m, |a, b| {
        let mut s = 0.0;
        for c in 0..m {
            for d in 0..m {
                s += ch.g_inv[(c, d)] * low[idx(a, c, b, d)];
            }
        }
        s
    });
    let mut bianchi = 0.0_f64;
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    let cyc = up[idx(i, j, k, l)] + up[idx(j, k, i, l)] + up[idx(k, i, j, l)];
                    bianchi = bianchi.max(cyc.abs());
                }
            }
        }
    }
    Ok(CurvaturePack {
        christoffels: ch,
        up,
        low,
        ricci,
        bianchi_residual: bianchi,
    })
}

pub fn riemann(metric: &MetricChart, u: &[f64]) -> Result<CurvaturePack> {
    curvature_from(&metric.validate_at(u)?)
}

pub fn ricci(metric: &MetricChart, u: &[f64]) -> Result<Mat> {
    Ok(riemann(metric, u)?.ricci)
}

pub(crate) fn gradient_from(ch: &Christoffels, f: &ScalarJet) -> Vector {
    &ch.g_inv * &f.grad
}

pub(crate) fn hessian_from(ch: &Christoffels, f: &ScalarJet) -> Mat {
    let m = ch.m();
    Mat::from_fn(m, m, |i, j| {
        f.hess[(i, j)] - (0..m).map(|k| ch.gamma[k][(i, j)] * f.grad[k]).sum::<f64>()
    })
}

pub(crate) fn laplacian_from(ch: &Christoffels, f: &ScalarJet) -> f64 {
    (&ch.g_inv * hessian_from(ch, f)).trace()
}

/// `g^{-1} df` in coordinates.
pub fn gradient(metric: &MetricChart, f: &ScalarField, u: &[f64]) -> Result<Vector> {
    Ok(gradient_from(&christoffels(metric, u)?, &f.jet(u, 1)))
}

/// `Hess f_ij = d_i d_j f - Γ^k_ij d_k f`.
pub fn hessian(metric: &MetricChart, f: &ScalarField, u: &[f64]) -> Result<Mat> {
    Ok(hessian_from(&christoffels(metric, u)?, &f.jet(u, 2)))
}

/// `Δf = trace_g Hess f`.
pub fn laplacian(metric: &MetricChart, f: &ScalarField, u: &[f64]) -> Result<f64> {
    Ok(laplacian_from(&christoffels(metric, u)?, &f.jet(u, 2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin;
    use crate::numerics::Dual3;

    #[test]
    fn flat_is_flat() {
        let g = MetricChart::flat(3, 1.0);
        let pack = riemann(&g, &[0.1, 0.2, 0.3]).unwrap();
        assert!(pack.christoffels.gamma.iter().all(|m| m.norm() == 0.0));
        assert_eq!(pack.ricci.norm(), 0.0);
        let f = ScalarField::coordinate(0);
        let grad = gradient(&g, &f, &[0.1, 0.2, 0.3]).unwrap();
        assert_eq!(grad.as_slice(), &[1.0, 0.0, 0.0]);
        assert_eq!(laplacian(&g, &f, &[0.1, 0.2, 0.3]).unwrap(), 0.0);
    }

    #[test]
    fn polar_christoffels() {
        let g = MetricChart::polar(0.5, 2.0).unwrap();
        let r = 1.3;
        let ch = christoffels(&g, &[r, 0.4]).unwrap();
        assert!((ch.gamma[0][(1, 1)] + r).abs() < 1e-14);
        assert!((ch.gamma[1][(0, 1)] - 1.0 / r).abs() < 1e-14);
        assert!((ch.gamma[1][(1, 0)] - 1.0 / r).abs() < 1e-14);
        let pack = riemann(&g, &[r, 0.4]).unwrap();
        assert!(pack.ricci.norm() < 1e-13);
        assert!(pack.bianchi_residual < 1e-13);
    }

    #[test]
    fn radial_laplacian_in_cartesian_coordinates() {
        let g = MetricChart::flat(2, 2.0);
        let f = ScalarField::radial(vec![0.0, 0.0], 1.0);
        let u = [0.6, 0.8];
        assert!((laplacian(&g, &f, &u).unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn round_sphere_sectional_curvature() {
        let r = 2.0;
        let sphere = builtin::round_sphere(r).unwrap();
        let g = MetricChart::induced(&sphere);
        let u = [1.1, 0.3];
        let pack = riemann(&g, &u).unwrap();
        let gm = g.g(&u);
        let area = gm[(0, 0)] * gm[(1, 1)] - gm[(0, 1)].powi(2);
        assert!((pack.r(0, 1, 0, 1) / area - 1.0 / (r * r)).abs() < 1e-12);
        assert!((&pack.ricci - &gm / (r * r)).norm() < 1e-12);
        assert!(pack.symmetry_residual() < 1e-12);
    }

    #[test]
    fn induced_metric_partials_match_dual_route() {
        let sphere = builtin::round_sphere(1.5).unwrap();
        let induced = MetricChart::induced(&sphere);
        let dual = MetricChart::from_duals("sphere", sphere.domain.clone(), |v| {
            let r2 = Dual3::constant(2.25);
            let s = v[0].sin();
            vec![r2.clone(), Dual3::constant(0.0), Dual3::constant(0.0), r2 * &s * &s]
        });
        let u = [0.9, -0.4];
        let (a, b) = (induced.jet(&u), dual.jet(&u));
        assert!((&a.g - &b.g).norm() < 1e-13);
        for c in 0..2 {
            assert!((&a.dg[c] - &b.dg[c]).norm() < 1e-13);
            for d in 0..2 {
                assert!((&a.ddg[c][d] - &b.ddg[c][d]).norm() < 1e-13);
            }
        }
    }
}
