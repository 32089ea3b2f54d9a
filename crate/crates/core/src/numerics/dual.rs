//! Truncated third-order forward-mode differentiation.
//!
//! A [`Dual3`] carries the value of a scalar expression together with its
//! first, second and third partial derivatives with respect to `dim` chart
//! variables. Charts, vector fields and scalar fields are written once as
//! closures over `Dual3` and every jet the geometry modules need (up to the
//! third derivatives used by curvature of pulled-back metrics) comes out
//! exactly, up to rounding.
//!
//! Storage is dense: `d2` is `dim * dim` and `d3` is `dim^3`, both fully
//! symmetric. Derivatives above `order` are not tracked and read as zero.
//! A value with `dim == 0` is a constant and combines with any variable.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq)]
pub struct Dual3 {
    dim: usize,
    order: u8,
    val: f64,
    d1: Vec<f64>,
    d2: Vec<f64>,
    d3: Vec<f64>,
}

impl Dual3 {
    pub fn constant(val: f64) -> Self {
        Dual3 {
            dim: 0,
            order: 0,
            val,
            d1: Vec::new(),
            d2: Vec::new(),
            d3: Vec::new(),
        }
    }

    /// The `index`-th coordinate function of a `dim`-dimensional chart,
    /// tracked to derivative `order` (at most 3).
    pub fn variable(val: f64, index: usize, dim: usize, order: u8) -> Self {
        assert!(index < dim, "variable index out of range");
        let order = order.min(3);
        let mut out = Dual3::zero_like(dim, order);
        out.val = val;
        if order >= 1 {
            out.d1[index] = 1.0;
        }
        out
    }

    /// Seeds all coordinate variables at `u`.
    pub fn variables(u: &[f64], order: u8) -> Vec<Dual3> {
        let dim = u.len();
        (0..dim)
            .map(|i| Dual3::variable(u[i], i, dim, order))
            .collect()
    }

    fn zero_like(dim: usize, order: u8) -> Self {
        Dual3 {
            dim,
            order,
            val: 0.0,
            d1: if order >= 1 { vec![0.0; dim] } else { Vec::new() },
            d2: if order >= 2 {
                vec![0.0; dim * dim]
            } else {
                Vec::new()
            },
            d3: if order >= 3 {
                vec![0.0; dim * dim * dim]
            } else {
                Vec::new()
            },
        }
    }

    pub fn value(&self) -> f64 {
        self.val
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn d1(&self, i: usize) -> f64 {
        self.d1.get(i).copied().unwrap_or(0.0)
    }

    pub fn d2(&self, i: usize, j: usize) -> f64 {
        if self.d2.is_empty() {
            0.0
        } else {
            self.d2[i * self.dim + j]
        }
    }

    pub fn d3(&self, i: usize, j: usize, k: usize) -> f64 {
        if self.d3.is_empty() {
            0.0
        } else {
            self.d3[(i * self.dim + j) * self.dim + k]
        }
    }

    fn shape_with(&self, other: &Dual3) -> (usize, u8) {
        match (self.dim, other.dim) {
            (0, _) => (other.dim, other.order),
            (_, 0) => (self.dim, self.order),
            (a, b) => {
                assert_eq!(a, b, "mixing duals of different dimension");
                (a, self.order.max(other.order))
            }
        }
    }

    fn linear_combo(&self, a: f64, other: &Dual3, b: f64) -> Dual3 {
        let (dim, order) = self.shape_with(other);
        let mut out = Dual3::zero_like(dim, order);
        out.val = a * self.val + b * other.val;
        for (k, o) in out.d1.iter_mut().enumerate() {
            *o = a * self.d1(k) + b * other.d1(k);
        }
        for (k, o) in out.d2.iter_mut().enumerate() {
            *o = a * self.d2.get(k).copied().unwrap_or(0.0)
                + b * other.d2.get(k).copied().unwrap_or(0.0);
        }
        for (k, o) in out.d3.iter_mut().enumerate() {
            *o = a * self.d3.get(k).copied().unwrap_or(0.0)
                + b * other.d3.get(k).copied().unwrap_or(0.0);
        }
        out
    }

    fn product(&self, other: &Dual3) -> Dual3 {
        let (dim, order) = self.shape_with(other);
        let (a, b) = (self, other);
        let mut out = Dual3::zero_like(dim, order);
        out.val = a.val * b.val;
        if order >= 1 {
            for i in 0..dim {
                out.d1[i] = a.d1(i) * b.val + a.val * b.d1(i);
            }
        }
        if order >= 2 {
            for i in 0..dim {
                for j in 0..dim {
                    out.d2[i * dim + j] = a.d2(i, j) * b.val
                        + a.d1(i) * b.d1(j)
                        + a.d1(j) * b.d1(i)
                        + a.val * b.d2(i, j);
                }
            }
        }
        if order >= 3 {
            for i in 0..dim {
                for j in 0..dim {
                    for k in 0..dim {
                        out.d3[(i * dim + j) * dim + k] = a.d3(i, j, k) * b.val
                            + a.d2(i, j) * b.d1(k)
                            + a.d2(i, k) * b.d1(j)
                            + a.d2(j, k) * b.d1(i)
                            + a.d1(i) * b.d2(j, k)
                            + a.d1(j) * b.d2(i, k)
                            + a.d1(k) * b.d2(i, j)
                            + a.val * b.d3(i, j, k);
                    }
                }
            }
        }
        out
    }

    /// Applies a univariate function given its value and first three
    /// derivatives at `self.value()`.
    pub fn compose(&self, f0: f64, f1: f64, f2: f64, f3: f64) -> Dual3 {
        let dim = self.dim;
        let order = self.order;
        let mut out = Dual3::zero_like(dim, order);
        out.val = f0;
        if order >= 1 {
            for i in 0..dim {
                out.d1[i] = f1 * self.d1[i];
            }
        }
        if order >= 2 {
            for i in 0..dim {
                for j in 0..dim {
                    out.d2[i * dim + j] = f2 * self.d1[i] * self.d1[j] + f1 * self.d2(i, j);
                }
            }
        }
        if order >= 3 {
            let a = self;
            for i in 0..dim {
                for j in 0..dim {
                    for k in 0..dim {
                        out.d3[(i * dim + j) * dim + k] = f3 * a.d1[i] * a.d1[j] * a.d1[k]
                            + f2 * (a.d2(i, j) * a.d1[k]
                                + a.d2(i, k) * a.d1[j]
                                + a.d2(j, k) * a.d1[i])
                            + f1 * a.d3(i, j, k);
                    }
                }
            }
        }
        out
    }

    pub fn recip(&self) -> Dual3 {
        let x = self.val;
        self.compose(1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x), -6.0 / (x * x * x * x))
    }

    pub fn sqrt(&self) -> Dual3 {
        let s = self.val.sqrt();
        let x = self.val;
        self.compose(
            s,
            0.5 / s,
            -0.25 / (x * s),
            0.375 / (x * x * s),
        )
    }

    pub fn powi(&self, n: i32) -> Dual3 {
        let x = self.val;
        let nf = n as f64;
        self.compose(
            x.powi(n),
            nf * x.powi(n - 1),
            nf * (nf - 1.0) * x.powi(n - 2),
            nf * (nf - 1.0) * (nf - 2.0) * x.powi(n - 3),
        )
    }

    pub fn sin(&self) -> Dual3 {
        let (s, c) = self.val.sin_cos();
        self.compose(s, c, -s, -c)
    }

    pub fn cos(&self) -> Dual3 {
        let (s, c) = self.val.sin_cos();
        self.compose(c, -s, -c, s)
    }

    pub fn exp(&self) -> Dual3 {
        let e = self.val.exp();
        self.compose(e, e, e, e)
    }

    pub fn ln(&self) -> Dual3 {
        let x = self.val;
        self.compose(x.ln(), 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x))
    }

    pub fn sinh(&self) -> Dual3 {
        let (s, c) = (self.val.sinh(), self.val.cosh());
        self.compose(s, c, s, c)
    }

    pub fn cosh(&self) -> Dual3 {
        let (s, c) = (self.val.sinh(), self.val.cosh());
        self.compose(c, s, c, s)
    }

    pub fn scale(&self, k: f64) -> Dual3 {
        self.linear_combo(k, &Dual3::constant(0.0), 0.0)
    }
}

impl From<f64> for Dual3 {
    fn from(v: f64) -> Self {
        Dual3::constant(v)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&Dual3> for &Dual3 {
            type Output = Dual3;
            fn $method(self, rhs: &Dual3) -> Dual3 {
                let f: fn(&Dual3, &Dual3) -> Dual3 = $body;
                f(self, rhs)
            }
        }
        impl $trait<Dual3> for Dual3 {
            type Output = Dual3;
            fn $method(self, rhs: Dual3) -> Dual3 {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Dual3> for Dual3 {
            type Output = Dual3;
            fn $method(self, rhs: &Dual3) -> Dual3 {
                (&self).$method(rhs)
            }
        }
        impl $trait<Dual3> for &Dual3 {
            type Output = Dual3;
            fn $method(self, rhs: Dual3) -> Dual3 {
                self.$method(&rhs)
            }
        }
        impl $trait<f64> for &Dual3 {
            type Output = Dual3;
            fn $method(self, rhs: f64) -> Dual3 {
                self.$method(&Dual3::constant(rhs))
            }
        }
        impl $trait<f64> for Dual3 {
            type Output = Dual3;
            fn $method(self, rhs: f64) -> Dual3 {
                (&self).$method(&Dual3::constant(rhs))
            }
        }
        impl $trait<&Dual3> for f64 {
            type Output = Dual3;
            fn $method(self, rhs: &Dual3) -> Dual3 {
                (&Dual3::constant(self)).$method(rhs)
            }
        }
        impl $trait<Dual3> for f64 {
            type Output = Dual3;
            fn $method(self, rhs: Dual3) -> Dual3 {
                (&Dual3::constant(self)).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| a.linear_combo(1.0, b, 1.0));
binop!(Sub, sub, |a, b| a.linear_combo(1.0, b, -1.0));
binop!(Mul, mul, |a, b| {
    if b.dim == 0 {
        a.linear_combo(b.val, &Dual3::constant(0.0), 0.0)
    } else if a.dim == 0 {
        b.linear_combo(a.val, &Dual3::constant(0.0), 0.0)
    } else {
        a.product(b)
    }
});
binop!(Div, div, |a, b| {
    if b.dim == 0 {
        a.linear_combo(1.0 / b.val, &Dual3::constant(0.0), 0.0)
    } else {
        a.product(&b.recip())
    }
});

impl Neg for &Dual3 {
    type Output = Dual3;
    fn neg(self) -> Dual3 {
        self.scale(-1.0)
    }
}

impl Neg for Dual3 {
    type Output = Dual3;
    fn neg(self) -> Dual3 {
        self.scale(-1.0)
    }
}

/// Dot product of two equally sized dual vectors.
pub fn dot(a: &[Dual3], b: &[Dual3]) -> Dual3 {
    a.iter()
        .zip(b)
        .fold(Dual3::constant(0.0), |acc, (x, y)| acc + x * y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12 * (1.0 + b.abs())
    }

    #[test]
    fn polynomial_derivatives_exact() {
        // f(x, y) = x^2 y + 3y^3
        let v = Dual3::variables(&[1.5, -2.0], 3);
        let (x, y) = (&v[0], &v[1]);
        let f = x * x * y + 3.0 * y.powi(3);
        assert!(close(f.value(), 2.25 * -2.0 + 3.0 * -8.0));
        assert!(close(f.d1(0), 2.0 * 1.5 * -2.0));
        assert!(close(f.d1(1), 2.25 + 9.0 * 4.0));
        assert!(close(f.d2(0, 0), 2.0 * -2.0));
        assert!(close(f.d2(0, 1), 3.0));
        assert!(close(f.d2(1, 1), 18.0 * -2.0));
        assert!(close(f.d3(0, 0, 1), 2.0));
        assert!(close(f.d3(1, 0, 0), 2.0));
        assert!(close(f.d3(1, 1, 1), 18.0));
        assert!(close(f.d3(0, 0, 0), 0.0));
    }

    #[test]
    fn transcendental_chain_rule() {
        // g(x) = sin(x^2), g''' = -12x sin? check against closed form
        let x0: f64 = 0.7;
        let v = Dual3::variables(&[x0], 3);
        let g = (&v[0] * &v[0]).sin();
        let (s, c) = (x0 * x0).sin_cos();
        assert!(close(g.d1(0), 2.0 * x0 * c));
        assert!(close(g.d2(0, 0), 2.0 * c - 4.0 * x0 * x0 * s));
        assert!(close(g.d3(0, 0, 0), -12.0 * x0 * s - 8.0 * x0.powi(3) * c));
    }

    #[test]
    fn quotient_and_sqrt() {
        let v = Dual3::variables(&[3.0, 4.0], 2);
        let r = (&v[0] * &v[0] + &v[1] * &v[1]).sqrt();
        assert!(close(r.value(), 5.0));
        assert!(close(r.d1(0), 0.6));
        // d2 r / dx dy = -x y / r^3
        assert!(close(r.d2(0, 1), -12.0 / 125.0));
        let q = &v[0] / &r;
        assert!(close(q.d1(1), -3.0 * 4.0 / 125.0));
    }

    #[test]
    fn order_truncation_reads_zero() {
        let v = Dual3::variables(&[2.0], 1);
        let f = &v[0] * &v[0];
        assert_eq!(f.d1(0), 4.0);
        assert_eq!(f.d2(0, 0), 0.0);
    }
}
