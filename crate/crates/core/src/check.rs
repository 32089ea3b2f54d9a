//! A single numeric verification: two sides of an identity and whether
//! they agree.

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// Label of the result in the source text being verified.
    pub paper_anchor: String,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub pass: bool,
}

impl Check {
    /// `|lhs - rhs| < tol`.
    pub fn scalar(name: impl Into<String>, anchor: &str, lhs: f64, rhs: f64, tol: f64) -> Check {
        let residual = (lhs - rhs).abs();
        Check {
            name: name.into(),
            paper_anchor: anchor.into(),
            lhs,
            rhs,
            residual,
            pass: residual < tol,
        }
    }

    /// `|lhs - rhs| < tol * max(1, |rhs|)`; the reported residual is the
    /// relative one.
    pub fn relative(name: impl Into<String>, anchor: &str, lhs: f64, rhs: f64, tol: f64) -> Check {
        let residual = (lhs - rhs).abs() / rhs.abs().max(1.0);
        Check {
            name: name.into(),
            paper_anchor: anchor.into(),
            lhs,
            rhs,
            residual,
            pass: residual < tol,
        }
    }

    /// For vector or matrix identities: sides are reported by norm and the
    /// residual is the norm of the difference.
    pub fn norms(
        name: impl Into<String>,
        anchor: &str,
        lhs_norm: f64,
        rhs_norm: f64,
        residual: f64,
        tol: f64,
    ) -> Check {
        Check {
            name: name.into(),
            paper_anchor: anchor.into(),
            lhs: lhs_norm,
            rhs: rhs_norm,
            residual,
            pass: residual < tol,
        }
    }

    /// A boolean property; sides are `1.0`/`0.0` and the expected value.
    pub fn flag(name: impl Into<String>, anchor: &str, observed: bool, expected: bool) -> Check {
        let (lhs, rhs) = (f64::from(u8::from(observed)), f64::from(u8::from(expected)));
        Check {
            name: name.into(),
            paper_anchor: anchor.into(),
            lhs,
            rhs,
            residual: (lhs - rhs).abs(),
            pass: observed == expected,
        }
    }

    /// A bound `value < limit`.
    pub fn below(name: impl Into<String>, anchor: &str, value: f64, limit: f64) -> Check {
        Check {
            name: name.into(),
            paper_anchor: anchor.into(),
            lhs: value,
            rhs: limit,
            residual: value,
            pass: value < limit,
        }
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}
