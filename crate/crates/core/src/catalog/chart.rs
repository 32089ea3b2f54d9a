use std::fmt;
use std::sync::Arc;

use rand::Rng as _;

use crate::error::{GeomError, Result};
use crate::numerics::{gram_schmidt, Dual3, Jet2, Jet3, Mat, Rng, Vector};

/// A map on dual numbers, `R^m -> R^n`.
pub type DualMap = Arc<dyn Fn(&[Dual3]) -> Vec<Dual3> + Send + Sync>;

/// A smooth map `R^m -> R^n` whose jets are obtained by forward-mode
/// differentiation. Used both for immersions and for vector fields along
/// them (unit `T`, normal fields `eta`).
#[derive(Clone)]
pub struct JetMap {
    m: usize,
    n: usize,
    f: DualMap,
}

pub type VectorField = JetMap;

impl fmt::Debug for JetMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JetMap(R^{} -> R^{})", self.m, self.n)
    }
}

impl JetMap {
    pub fn new<F>(m: usize, n: usize, f: F) -> Self
    where
        F: Fn(&[Dual3]) -> Vec<Dual3> + Send + Sync + 'static,
    {
        JetMap {
            m,
            n,
            f: Arc::new(f),
        }
    }

    /// Ambient-constant field.
    pub fn constant(m: usize, v: Vector) -> Self {
        let n = v.len();
        JetMap::new(m, n, move |_| v.iter().map(|&c| Dual3::constant(c)).collect())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn apply(&self, vars: &[Dual3]) -> Vec<Dual3> {
        let out = (self.f)(vars);
        debug_assert_eq!(out.len(), self.n, "jet map produced wrong output size");
        out
    }

    pub fn eval_duals(&self, u: &[f64], order: u8) -> Vec<Dual3> {
        assert_eq!(u.len(), self.m, "point has wrong chart dimension");
        self.apply(&Dual3::variables(u, order))
    }

    pub fn value(&self, u: &[f64]) -> Vector {
        let out = self.eval_duals(u, 0);
        Vector::from_iterator(self.n, out.iter().map(Dual3::value))
    }

    pub fn jet2(&self, u: &[f64]) -> Jet2 {
        Jet2::from_duals(&self.eval_duals(u, 2), self.m)
    }

    /// Value and jacobian only.
    pub fn jet1(&self, u: &[f64]) -> (Vector, Mat) {
        let out = self.eval_duals(u, 1);
        let value = Vector::from_iterator(self.n, out.iter().map(Dual3::value));
        let jac = Mat::from_fn(self.n, self.m, |k, a| out[k].d1(a));
        (value, jac)
    }

    pub fn jet3(&self, u: &[f64]) -> Jet3 {
        Jet3::from_duals(&self.eval_duals(u, 3), self.m)
    }

    /// `x -> self(x) + t * other(x)`.
    pub fn add_scaled(&self, other: &JetMap, t: f64) -> JetMap {
        assert_eq!((self.m, self.n), (other.m, other.n));
        let (a, b) = (self.clone(), other.clone());
        JetMap::new(self.m, self.n, move |v| {
            a.apply(v)
                .into_iter()
                .zip(b.apply(v))
                .map(|(x, y)| x + y * t)
                .collect()
        })
    }

    /// Post-composition with the affine map `x -> R x + shift`.
    pub fn affine(&self, rotation: &Mat, shift: &Vector) -> JetMap {
        let n_out = rotation.nrows();
        assert_eq!(rotation.ncols(), self.n);
        assert_eq!(shift.len(), n_out);
        let (inner, r, s) = (self.clone(), rotation.clone(), shift.clone());
        JetMap::new(self.m, n_out, move |v| {
            let x = inner.apply(v);
            (0..n_out)
                .map(|i| {
                    let mut acc = Dual3::constant(s[i]);
                    for (j, xj) in x.iter().enumerate() {
                        if r[(i, j)] != 0.0 {
                            acc = acc + xj * r[(i, j)];
                        }
                    }
                    acc
                })
                .collect()
        })
    }
}

/// Open axis-aligned box in chart coordinates, optionally with a closed
/// ball removed (used to keep away from cone apices). The ball may be
/// given in fewer coordinates than the box, in which case it removes a
/// solid cylinder.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub excluded_ball: Option<(Vec<f64>, f64)>,
}

/// Fraction of each side kept clear of the boundary when sampling.
const SAMPLE_MARGIN: f64 = 0.05;

impl Domain {
    pub fn new(bounds: &[(f64, f64)]) -> Result<Self> {
        if bounds.is_empty() {
            return Err(GeomError::param("domain", "needs at least one axis"));
        }
        for (i, &(lo, hi)) in bounds.iter().enumerate() {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(GeomError::param(
                    "domain",
                    format!("axis {i} has empty or non-finite range [{lo}, {hi}]"),
                ));
            }
        }
        Ok(Domain {
            lo: bounds.iter().map(|b| b.0).collect(),
            hi: bounds.iter().map(|b| b.1).collect(),
            excluded_ball: None,
        })
    }

    pub fn cube(m: usize, half: f64) -> Self {
        Domain::new(&vec![(-half, half); m]).expect("valid cube")
    }

    pub fn excluding_ball(mut self, center: Vec<f64>, radius: f64) -> Self {
        self.excluded_ball = Some((center, radius));
        self
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn center(&self) -> Vec<f64> {
        let mut c: Vec<f64> = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| 0.5 * (l + h))
            .collect();
        if let Some((ball, r)) = &self.excluded_ball {
            let dist: f64 = c
                .iter()
                .zip(ball)
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt();
            if dist <= *r {
                // push along the first axis to the midpoint between ball and box edge
                c[0] = 0.5 * (ball[0] + r + self.hi[0]);
            }
        }
        c
    }

    /// Interior test with an absolute margin from the box faces and the
    /// excluded ball.
    pub fn contains(&self, u: &[f64], margin: f64) -> bool {
        let in_box = u
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(x, (l, h))| *x > l + margin && *x < h - margin);
        in_box && !self.in_excluded(u, margin)
    }

    fn in_excluded(&self, u: &[f64], margin: f64) -> bool {
        match &self.excluded_ball {
            Some((c, r)) => {
                let d2: f64 = u.iter().zip(c).map(|(a, b)| (a - b).powi(2)).sum();
                d2.sqrt() <= r + margin
            }
            None => false,
        }
    }

    /// Uniform sample from the box shrunk by 5% per side, rejecting the
    /// excluded ball (inflated by the same margin).
    pub fn sample(&self, rng: &mut Rng) -> Vec<f64> {
        let margin_ball = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| SAMPLE_MARGIN * (h - l))
            .fold(f64::INFINITY, f64::min);
        loop {
            let u: Vec<f64> = self
                .lo
                .iter()
                .zip(&self.hi)
                .map(|(l, h)| {
                    let pad = SAMPLE_MARGIN * (h - l);
                    rng.random_range((l + pad)..(h - pad))
                })
                .collect();
            if !self.in_excluded(&u, margin_ball) {
                return u;
            }
        }
    }

    pub fn samples(&self, rng: &mut Rng, count: usize) -> Vec<Vec<f64>> {
        (0..count).map(|_| self.sample(rng)).collect()
    }
}

/// Scalar function on a chart with exact jets.
#[derive(Clone)]
pub struct ScalarField {
    pub name: String,
    f: Arc<dyn Fn(&[Dual3]) -> Dual3 + Send + Sync>,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarField({})", self.name)
    }
}

/// Value, gradient, Hessian and third partials of a scalar field.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarJet {
    pub value: f64,
    pub grad: Vector,
    pub hess: Mat,
    /// `third[(a * m + b) * m + c]`, zero unless requested.
    pub third: Vec<f64>,
}

impl ScalarJet {
    pub fn third(&self, a: usize, b: usize, c: usize) -> f64 {
        let m = self.grad.len();
        self.third[(a * m + b) * m + c]
    }
}

impl ScalarField {
    pub fn new<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&[Dual3]) -> Dual3 + Send + Sync + 'static,
    {
        ScalarField {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn apply(&self, vars: &[Dual3]) -> Dual3 {
        (self.f)(vars)
    }

    pub fn value(&self, u: &[f64]) -> f64 {
        self.apply(&Dual3::variables(u, 0)).value()
    }

    pub fn jet(&self, u: &[f64], order: u8) -> ScalarJet {
        let m = u.len();
        let d = self.apply(&Dual3::variables(u, order));
        let mut third = vec![0.0; m * m * m];
        if order >= 3 {
            for a in 0..m {
                for b in 0..m {
                    for c in 0..m {
                        third[(a * m + b) * m + c] = d.d3(a, b, c);
                    }
                }
            }
        }
        ScalarJet {
            value: d.value(),
            grad: Vector::from_fn(m, |a, _| d.d1(a)),
            hess: Mat::from_fn(m, m, |a, b| d.d2(a, b)),
            third,
        }
    }

    pub fn constant(c: f64) -> Self {
        ScalarField::new(format!("const({c})"), move |_| Dual3::constant(c))
    }

    /// `sum_i coeffs[i] * u_i + offset`.
    pub fn linear(coeffs: Vec<f64>, offset: f64) -> Self {
        ScalarField::new(format!("linear({coeffs:?})"), move |v| {
            coeffs
                .iter()
                .zip(v)
                .fold(Dual3::constant(offset), |acc, (c, x)| acc + x * *c)
        })
    }

    /// `scale * |u - center|` over the first `center.len()` coordinates.
    pub fn radial(center: Vec<f64>, scale: f64) -> Self {
        ScalarField::new(format!("radial({scale})"), move |v| {
            let r2 = center
                .iter()
                .zip(v)
                .fold(Dual3::constant(0.0), |acc, (c, x)| {
                    let d = x - *c;
                    acc + &d * &d
                });
            r2.sqrt() * scale
        })
    }

    /// `u_index^2`.
    pub fn square(index: usize) -> Self {
        ScalarField::new(format!("square(u{index})"), move |v| &v[index] * &v[index])
    }

    /// Coordinate function `u_index`.
    pub fn coordinate(index: usize) -> Self {
        ScalarField::new(format!("u{index}"), move |v| v[index].clone())
    }
}

/// Recorded provenance of a chart built by [`crate::catalog::graph_immersion`].
#[derive(Debug, Clone)]
pub struct GraphInfo {
    pub base: ImmersionChart,
    pub f: ScalarField,
}

/// A parametrised immersion of a box in `R^m` into `R^n`.
#[derive(Debug, Clone)]
pub struct ImmersionChart {
    pub name: String,
    pub domain: Domain,
    pub map: JetMap,
    pub graph: Option<Arc<GraphInfo>>,
}

impl ImmersionChart {
    /// `m == n` is allowed for open subsets used as graph bases.
    pub fn new(name: impl Into<String>, domain: Domain, map: JetMap) -> Result<Self> {
        if domain.dim() != map.m() {
            return Err(GeomError::DimensionMismatch(format!(
                "domain has {} axes but map expects {} variables",
                domain.dim(),
                map.m()
            )));
        }
        if map.m() > map.n() {
            return Err(GeomError::DimensionMismatch(format!(
                "intrinsic dimension {} exceeds ambient dimension {}",
                map.m(),
                map.n()
            )));
        }
        Ok(ImmersionChart {
            name: name.into(),
            domain,
            map,
            graph: None,
        })
    }

    pub fn m(&self) -> usize {
        self.map.m()
    }

    pub fn n(&self) -> usize {
        self.map.n()
    }

    pub fn codim(&self) -> usize {
        self.n() - self.m()
    }

    pub fn point(&self, u: &[f64]) -> Vector {
        self.map.value(u)
    }

    pub fn jet2(&self, u: &[f64]) -> Jet2 {
        self.map.jet2(u)
    }

    pub fn jet3(&self, u: &[f64]) -> Jet3 {
        self.map.jet3(u)
    }

    pub fn sample(&self, rng: &mut Rng) -> Vec<f64> {
        self.domain.sample(rng)
    }

    pub fn samples(&self, rng: &mut Rng, count: usize) -> Vec<Vec<f64>> {
        self.domain.samples(rng, count)
    }

    /// Rank of the jacobian at `u` (Gram-Schmidt with tolerance `tol`).
    pub fn jacobian_rank(&self, u: &[f64], tol: f64) -> usize {
        let (_, jac) = self.map.jet1(u);
        let cols: Vec<Vector> = (0..self.m()).map(|a| jac.column(a).clone_owned()).collect();
        gram_schmidt(&cols, tol).len()
    }

    /// Checks the immersion condition at `count` seeded samples.
    pub fn check_immersion(&self, rng: &mut Rng, count: usize, tol: f64) -> Result<()> {
        for u in self.samples(rng, count) {
            let rank = self.jacobian_rank(&u, tol);
            if rank < self.m() {
                return Err(GeomError::DegenerateImmersion {
                    point: u,
                    rank,
                    expected: self.m(),
                });
            }
        }
        Ok(())
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_domain(mut self, domain: Domain) -> Result<Self> {
        if domain.dim() != self.m() {
            return Err(GeomError::DimensionMismatch("domain dimension".into()));
        }
        self.domain = domain;
        Ok(self)
    }

    /// Image under the rigid motion `x -> R x + shift`.
    pub fn rigid_motion(&self, rotation: &Mat, shift: &Vector) -> ImmersionChart {
        ImmersionChart {
            name: format!("rigid({})", self.name),
            domain: self.domain.clone(),
            map: self.map.affine(rotation, shift),
            graph: None,
        }
    }

    pub fn translated(&self, shift: &Vector) -> ImmersionChart {
        let r = Mat::identity(self.n(), self.n());
        let mut out = self.rigid_motion(&r, shift);
        out.name = format!("translated({})", self.name);
        out
    }

    /// Same chart regarded inside `R^{n_new}` (trailing zero coordinates).
    pub fn embed(&self, n_new: usize) -> ImmersionChart {
        assert!(n_new >= self.n());
        let r = Mat::from_fn(n_new, self.n(), |i, j| if i == j { 1.0 } else { 0.0 });
        let mut out = ImmersionChart {
            name: format!("{}@R{}", self.name, n_new),
            domain: self.domain.clone(),
            map: self.map.affine(&r, &Vector::zeros(n_new)),
            graph: None,
        };
        if n_new == self.n() {
            out.graph = self.graph.clone();
        }
        out
    }

    /// Product with a line: `(u, s) -> (self(u), s)` in `R^{n+1}`, with
    /// `s` ranging over `[-half_length, half_length]`.
    pub fn cylinder(&self, half_length: f64) -> ImmersionChart {
        let inner = self.map.clone();
        let (m, n) = (self.m(), self.n());
        let map = JetMap::new(m + 1, n + 1, move |v| {
            let mut out = inner.apply(&v[..m]);
            out.push(v[m].clone());
            out
        });
        let mut bounds: Vec<(f64, f64)> = self
            .domain
            .lo
            .iter()
            .cloned()
            .zip(self.domain.hi.iter().cloned())
            .collect();
        bounds.push((-half_length, half_length));
        let mut domain = Domain::new(&bounds).expect("valid bounds");
        // ball distance only reads the leading coordinates, so this excludes a solid cylinder
        domain.excluded_ball = self.domain.excluded_ball.clone();
        ImmersionChart {
            name: format!("cylinder({})", self.name),
            domain,
            map,
            graph: None,
        }
    }
}
