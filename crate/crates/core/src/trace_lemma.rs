//! The rational trace function `φ(s) = Tr((D - sH)(1 - 2sD + s²H)^{-1})`
//! with `H = D² + N`, and the decision that `φ ≡ 0` forces `D = N = 0`.

use rand::Rng as _;
use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::numerics::linalg::asymmetry;
use crate::numerics::{det, inv, random_rotation, random_symmetric, sym_eig, Mat, Rng, Vector};

pub const MAX_K: usize = 12;
/// `|det(1 - 2sD + s²H)|` at or below this is a pole.
pub const POLE_DET_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

/// `(D, N, H = D² + N)` with `D` symmetric and `N` positive semi-definite.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricTriple {
    d: Mat,
    n: Mat,
    h: Mat,
}

impl SymmetricTriple {
    pub fn new(d: Mat, n: Mat) -> Result<SymmetricTriple> {
        let k = d.nrows();
        if d.shape() != (k, k) || n.shape() != (k, k) {
            return Err(GeomError::DimensionMismatch(format!(
                "D is {:?}, N is {:?}",
                d.shape(),
                n.shape()
            )));
        }
        if k > MAX_K {
            return Err(GeomError::param("k", format!("at most {MAX_K}, got {k}")));
        }
        for m in [&d, &n] {
            let a = asymmetry(m);
            if a > 1e-12 {
                return Err(GeomError::NotSymmetric { asymmetry: a });
            }
        }
        if k > 0 {
            let (ev, _) = sym_eig(&n)?;
            let min = ev[k - 1];
            if min < -PSD_TOL {
                return Err(GeomError::NonPositiveDefinite { min_eigenvalue: min });
            }
        }
        let h = &d * &d + &n;
        Ok(SymmetricTriple { d, n, h })
    }

    pub fn zero(k: usize) -> SymmetricTriple {
        SymmetricTriple::new(Mat::zeros(k, k), Mat::zeros(k, k)).expect("zero triple is valid")
    }

    pub fn k(&self) -> usize {
        self.d.nrows()
    }

    pub fn d(&self) -> &Mat {
        &self.d
    }

    pub fn n(&self) -> &Mat {
        &self.n
    }

    pub fn h(&self) -> &Mat {
        &self.h
    }

    /// `P(s) = det(1 - 2sD + s²H)`.
    pub fn pole_polynomial(&self, s: f64) -> f64 {
        det(&self.denominator(s))
    }

    fn denominator(&self, s: f64) -> Mat {
        Mat::identity(self.k(), self.k()) - &self.d * (2.0 * s) + &self.h * (s * s)
    }

    pub fn norm(&self) -> f64 {
        self.d.norm() + self.n.norm()
    }
}

/// `φ(s)`.
pub fn trace_rational(triple: &SymmetricTriple, s: f64) -> Result<f64> {
    let g = triple.denominator(s);
    let p = det(&g);
    if p.abs() <= POLE_DET_TOL {
        return Err(GeomError::PoleAt { s, det: p });
    }
    let g_inv = inv(&g).map_err(|_| GeomError::PoleAt { s, det: p })?;
    Ok(((triple.d() - triple.h() * s) * g_inv).trace())
}

/// `Tr((tD - H)(t² - 2tD + H)^{-1})`. Substituting `s = 1/t` gives
/// `t · substituted_trace(t) = φ(1/t)`, so both vanish together.
pub fn substituted_trace(triple: &SymmetricTriple, t: f64) -> Result<f64> {
    let k = triple.k();
    let g = Mat::identity(k, k) * (t * t) - triple.d() * (2.0 * t) + triple.h();
    let p = det(&g);
    if p.abs() <= POLE_DET_TOL {
        return Err(GeomError::PoleAt { s: 1.0 / t, det: p });
    }
    let g_inv = inv(&g).map_err(|_| GeomError::PoleAt { s: 1.0 / t, det: p })?;
    Ok(((triple.d() * t - triple.h()) * g_inv).trace())
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelSplit {
    /// Orthonormal basis of `ker H`, as columns.
    pub ker_basis: Mat,
    /// Orthonormal basis of `(ker H)^⊥`, as columns.
    pub complement_basis: Mat,
    pub d1: Mat,
    pub n1: Mat,
    pub h1: Mat,
    /// Largest `|D v|`, `|N v|` over unit `v` in the kernel basis.
    pub d_on_ker: f64,
    pub n_on_ker: f64,
    /// `|H1 - (D1² + N1)|`.
    pub block_residual: f64,
}

/// Splits along `ker H ⊕ (ker H)^⊥`, with the kernel taken as eigenvectors
/// of `H` with `|λ| < tol`.
pub fn kernel_split(triple: &SymmetricTriple, tol: f64) -> Result<KernelSplit> {
    let k = triple.k();
    let (ev, q) = sym_eig(triple.h())?;
    let ker: Vec<usize> = (0..k).filter(|&i| ev[i].abs() < tol).collect();
    let comp: Vec<usize> = (0..k).filter(|&i| ev[i].abs() >= tol).collect();
    let ker_basis = q.select_columns(&ker);
    let c = q.select_columns(&comp);
    let col_max = |m: &Mat| {
        m.column_iter()
            .map(|col| col.norm())
            .fold(0.0_f64, f64::max)
    };
    let d1 = c.transpose() * triple.d() * &c;
    let n1 = c.transpose() * triple.n() * &c;
    let h1 = c.transpose() * triple.h() * &c;
    let block_residual = (&h1 - (&d1 * &d1 + &n1)).amax();
    Ok(KernelSplit {
        d_on_ker: col_max(&(triple.d() * &ker_basis)),
        n_on_ker: col_max(&(triple.n() * &ker_basis)),
        ker_basis,
        complement_basis: c,
        d1,
        n1,
        h1,
        block_residual,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaDecision {
    pub grid_points: usize,
    pub max_abs_phi: f64,
    pub phi_identically_zero: bool,
    pub triple_norm: f64,
    pub triple_is_zero: bool,
}

impl LemmaDecision {
    /// `φ ≡ 0` without the triple being zero.
    pub fn is_counterexample(&self) -> bool {
        self.phi_identically_zero && !self.triple_is_zero
    }
}

/// `2k + 5` Chebyshev points in `(0, 1/2)`.
pub fn default_s_grid(k: usize) -> Vec<f64> {
    chebyshev_nodes(2 * k + 5, 0.0, 0.5)
}

pub fn chebyshev_nodes(count: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..count)
        .map(|i| {
            let x = ((2 * i + 1) as f64 * std::f64::consts::PI / (2 * count) as f64).cos();
            0.5 * (lo + hi) + 0.5 * (hi - lo) * x
        })
        .collect()
}

/// Decides `φ ≡ 0` on the pole-free part of `s_grid`. Since `φ P` is a
/// polynomial of degree at most `2k - 1`, `2k + 1` pole-free zeros of `φ`
/// force it to vanish identically.
pub fn lemma_la_decision(
    triple: &SymmetricTriple,
    s_grid: &[f64],
    tol: f64,
) -> Result<LemmaDecision> {
    let needed = 2 * triple.k() + 1;
    let mut values = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        match trace_rational(triple, s) {
            Ok(v) => values.push(v),
            Err(GeomError::PoleAt { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    if values.len() < needed {
        return Err(GeomError::InsufficientGrid {
            needed,
            got: values.len(),
        });
    }
    let max_abs_phi = values.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let triple_norm = triple.norm();
    Ok(LemmaDecision {
        grid_points: values.len(),
        max_abs_phi,
        phi_identically_zero: max_abs_phi < tol,
        triple_norm,
        triple_is_zero: triple_norm < tol,
    })
}

/// Interpolates `φ P` through `2k` Chebyshev nodes in `(0, 1/2)` and
/// returns the largest mismatch `|q(s)/P(s) - φ(s)|` over `held_out`.
pub fn rationality_residual(triple: &SymmetricTriple, held_out: &[f64]) -> Result<f64> {
    let nodes = chebyshev_nodes((2 * triple.k()).max(1), 0.0, 0.5);
    let ys = nodes
        .iter()
        .map(|&s| Ok(trace_rational(triple, s)? * triple.pole_polynomial(s)))
        .collect::<Result<Vec<f64>>>()?;
    let mut worst = 0.0_f64;
    for &s in held_out {
        let q = lagrange(&nodes, &ys, s);
        let phi = trace_rational(triple, s)?;
        worst = worst.max((q / triple.pole_polynomial(s) - phi).abs());
    }
    Ok(worst)
}

fn lagrange(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    xs.iter()
        .enumerate()
        .map(|(i, &xi)| {
            let w: f64 = xs
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, &xj)| (x - xj) / (xi - xj))
                .product();
            ys[i] * w
        })
        .sum()
}

/// `D` symmetric with entries in `[-1, 1]`, `N = BᵀB` with `B` of random
/// rank in `0..=k`.
pub fn random_triple(rng: &mut Rng, k: usize) -> SymmetricTriple {
    let d = random_symmetric(rng, k, 1.0);
    let rank = rng.random_range(0..=k);
    let b = Mat::from_fn(rank, k, |_, _| rng.random_range(-1.0..1.0));
    let n = b.transpose() * b;
    SymmetricTriple::new(d, symmetrized(n)).expect("random triple is valid")
}

/// Simultaneously diagonalisable `D`, `N` sharing a kernel of random
/// dimension.
pub fn random_commuting_triple(rng: &mut Rng, k: usize) -> SymmetricTriple {
    let q = random_rotation(rng, k);
    let zeros = rng.random_range(0..=k);
    let dd = Vector::from_fn(k, |i, _| if i < zeros { 0.0 } else { rng.random_range(-1.0..1.0) });
    let nn = Vector::from_fn(k, |i, _| if i < zeros { 0.0 } else { rng.random_range(0.0..1.0) });
    let d = &q * Mat::from_diagonal(&dd) * q.transpose();
    let n = &q * Mat::from_diagonal(&nn) * q.transpose();
    SymmetricTriple::new(symmetrized(d), symmetrized(n)).expect("commuting triple is valid")
}

fn symmetrized(m: Mat) -> Mat {
    (&m + m.transpose()) * 0.5
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Tolerances;

    fn diag(v: &[f64]) -> Mat {
        Mat::from_diagonal(&Vector::from_column_slice(v))
    }

    #[test]
    fn zero_triple() {
        let t = SymmetricTriple::zero(3);
        assert_eq!(trace_rational(&t, 0.3).unwrap(), 0.0);
        assert_eq!(substituted_trace(&t, 2.0).unwrap(), 0.0);
        let split = kernel_split(&t, 1e-9).unwrap();
        assert_eq!(split.ker_basis.ncols(), 3);
        assert_eq!(split.d1.nrows(), 0);
        let dec = lemma_la_decision(&t, &default_s_grid(3), 1e-9).unwrap();
        assert!(dec.phi_identically_zero && dec.triple_is_zero);
    }

    #[test]
    fn one_over_one_minus_s() {
        let t = SymmetricTriple::new(diag(&[1.0, 0.0]), Mat::zeros(2, 2)).unwrap();
        assert!((trace_rational(&t, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((trace_rational(&t, 0.5).unwrap() - 2.0).abs() < 1e-12);
        assert!(matches!(trace_rational(&t, 1.0), Err(GeomError::PoleAt { .. })));
        // φ(1/2) = 2 equals t · substituted_trace(t) at t = 2.
        assert!((2.0 * substituted_trace(&t, 2.0).unwrap() - 2.0).abs() < 1e-12);
        let split = kernel_split(&t, 1e-9).unwrap();
        assert_eq!(split.ker_basis.ncols(), 1);
        assert!(split.ker_basis[(1, 0)].abs() > 1.0 - 1e-12);
        assert!((split.d1[(0, 0)] - 1.0).abs() < 1e-12 && split.n1[(0, 0)].abs() < 1e-12);
        let dec = lemma_la_decision(&t, &default_s_grid(2), 1e-9).unwrap();
        assert!(!dec.phi_identically_zero && !dec.triple_is_zero);
    }

    #[test]
    fn identity_n() {
        let t = SymmetricTriple::new(Mat::zeros(3, 3), Mat::identity(3, 3)).unwrap();
        assert!((trace_rational(&t, 1.0).unwrap() + 1.5).abs() < 1e-14);
        let lim = substituted_trace(&t, 1e-6).unwrap();
        assert!((lim + 3.0).abs() < 1e-3);
    }

    #[test]
    fn rejects_indefinite_n() {
        assert!(matches!(
            SymmetricTriple::new(Mat::zeros(2, 2), diag(&[1.0, -0.1])),
            Err(GeomError::NonPositiveDefinite { .. })
        ));
    }

    #[test]
    fn insufficient_grid() {
        let t = SymmetricTriple::new(diag(&[1.0, 0.0]), Mat::zeros(2, 2)).unwrap();
        assert!(matches!(
            lemma_la_decision(&t, &[1.0, 0.1], 1e-9),
            Err(GeomError::InsufficientGrid { needed: 5, got: 1 })
        ));
    }

    #[test]
    fn commuting_kernel_inclusion() {
        let mut rng = Tolerances::default().rng();
        for k in 1..=6 {
            let t = random_commuting_triple(&mut rng, k);
            let s = kernel_split(&t, 1e-9).unwrap();
            assert!(s.d_on_ker < 1e-8 && s.n_on_ker < 1e-8);
            assert!(s.block_residual < 1e-9);
        }
    }
}
