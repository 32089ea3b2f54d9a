//! Polynomial immersions read from JSON.
//!
//! ```json
//! { "m": 2, "n": 3, "domain": [[-1, 1], [-1, 1]],
//!   "components": [ [ {"c": 1.0, "e": [1, 0]} ],
//!                   [ {"c": 1.0, "e": [0, 1]} ],
//!                   [ {"c": 1.0, "e": [1, 1]} ] ] }
//! ```

use std::path::Path;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::catalog::chart::{Domain, ImmersionChart, JetMap};
use crate::error::{GeomError, Result};
use crate::numerics::{Dual3, Rng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub c: f64,
    pub e: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolySpec {
    pub m: usize,
    pub n: usize,
    pub domain: Vec<[f64; 2]>,
    pub components: Vec<Vec<Term>>,
}

fn line_of(text: &str, needle: &str) -> usize {
    text.lines()
        .position(|l| l.contains(needle))
        .map(|i| i + 1)
        .unwrap_or(1)
}

impl PolySpec {
    pub fn from_json_str(text: &str) -> Result<PolySpec> {
        let spec: PolySpec = serde_json::from_str(text).map_err(|e| GeomError::Parse {
            line: e.line(),
            field: "<document>".into(),
            message: e.to_string(),
        })?;
        spec.validate(text)?;
        Ok(spec)
    }

    fn validate(&self, text: &str) -> Result<()> {
        let err = |field: &str, key: &str, message: String| GeomError::Parse {
            line: line_of(text, key),
            field: field.to_string(),
            message,
        };
        if self.m == 0 {
            return Err(err("m", "\"m\"", "m must be at least 1".into()));
        }
        if self.m >= self.n {
            return Err(err(
                "m",
                "\"m\"",
                format!("need m < n for an immersion, got m = {}, n = {}", self.m, self.n),
            ));
        }
        if self.domain.len() != self.m {
            return Err(err(
                "domain",
                "\"domain\"",
                format!("expected {} intervals, got {}", self.m, self.domain.len()),
            ));
        }
        for (i, [lo, hi]) in self.domain.iter().enumerate() {
            if !(lo < hi) {
                return Err(err(
                    &format!("domain[{i}]"),
                    "\"domain\"",
                    format!("empty interval [{lo}, {hi}]"),
                ));
            }
        }
        if self.components.is_empty() {
            return Err(err("components", "\"components\"", "component list is empty".into()));
        }
        if self.components.len() != self.n {
            return Err(err(
                "components",
                "\"components\"",
                format!("expected {} component lists, got {}", self.n, self.components.len()),
            ));
        }
        for (k, comp) in self.components.iter().enumerate() {
            for (t, term) in comp.iter().enumerate() {
                if term.e.len() != self.m {
                    return Err(err(
                        &format!("components[{k}][{t}].e"),
                        "\"e\"",
                        format!("exponent list has length {}, expected {}", term.e.len(), self.m),
                    ));
                }
                if !term.c.is_finite() {
                    return Err(err(
                        &format!("components[{k}][{t}].c"),
                        "\"c\"",
                        "coefficient is not finite".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Random polynomial spec with all monomials of total degree at most
    /// `degree` and coefficients in `[-1, 1]`, plus an identity part in the
    /// first `m` components so the map is an immersion near the origin.
    pub fn random(rng: &mut Rng, m: usize, n: usize, degree: u32) -> PolySpec {
        let mut exponents = Vec::new();
        let mut e = vec![0u32; m];
        loop {
            if e.iter().sum::<u32>() <= degree {
                exponents.push(e.clone());
            }
            let mut i = 0;
            loop {
                if i == m {
                    break;
                }
                e[i] += 1;
                if e[i] <= degree {
                    break;
                }
                e[i] = 0;
                i += 1;
            }
            if i == m {
                break;
            }
        }
        let components = (0..n)
            .map(|k| {
                exponents
                    .iter()
                    .filter(|e| e.iter().sum::<u32>() >= 2 || k >= m)
                    .map(|e| Term {
                        c: rng.random_range(-0.5..=0.5),
                        e: e.clone(),
                    })
                    .chain((k < m).then(|| Term {
                        c: 1.0,
                        e: (0..m).map(|a| u32::from(a == k)).collect(),
                    }))
                    .collect()
            })
            .collect();
        PolySpec {
            m,
            n,
            domain: vec![[-0.4, 0.4]; m],
            components,
        }
    }

    pub fn to_chart(&self, name: impl Into<String>) -> Result<ImmersionChart> {
        let bounds: Vec<(f64, f64)> = self.domain.iter().map(|[a, b]| (*a, *b)).collect();
        let domain = Domain::new(&bounds)?;
        let comps = self.components.clone();
        let map = JetMap::new(self.m, self.n, move |v| {
            comps
                .iter()
                .map(|terms| {
                    terms.iter().fold(Dual3::constant(0.0), |acc, t| {
                        let mono = t
                            .e
                            .iter()
                            .zip(v)
                            .filter(|(p, _)| **p > 0)
                            .fold(Dual3::constant(t.c), |m, (p, x)| m * x.powi(*p as i32));
                        acc + mono
                    })
                })
                .collect()
        });
        ImmersionChart::new(name, domain, map)
    }
}

/// Reads a polynomial immersion file.
pub fn load_poly(path: impl AsRef<Path>) -> Result<ImmersionChart> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| GeomError::Parse {
        line: 0,
        field: "<file>".into(),
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    PolySpec::from_json_str(&text)?.to_chart(format!("poly({})", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SADDLE: &str = r#"{
  "m": 2, "n": 3,
  "domain": [[-2, 2], [-3, 3]],
  "components": [
    [ {"c": 1.0, "e": [1, 0]} ],
    [ {"c": 1.0, "e": [0, 1]} ],
    [ {"c": 1.0, "e": [1, 1]} ]
  ]
}"#;

    #[test]
    fn saddle_value_and_jet() {
        let chart = PolySpec::from_json_str(SADDLE).unwrap().to_chart("saddle").unwrap();
        let jet = chart.jet2(&[1.0, 2.0]);
        assert_eq!(jet.value.as_slice(), &[1.0, 2.0, 2.0]);
        assert_eq!(jet.jacobian[(2, 0)], 2.0);
        assert_eq!(jet.jacobian[(2, 1)], 1.0);
        assert_eq!(jet.hessians[2][(0, 1)], 1.0);
    }

    #[test]
    fn empty_components_rejected() {
        let text = r#"{"m": 1, "n": 2, "domain": [[0, 1]], "components": []}"#;
        match PolySpec::from_json_str(text) {
            Err(GeomError::Parse { field, .. }) => assert_eq!(field, "components"),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn codimension_zero_rejected() {
        let text = r#"{"m": 2, "n": 2, "domain": [[0, 1], [0, 1]],
            "components": [[{"c": 1, "e": [1, 0]}], [{"c": 1, "e": [0, 1]}]]}"#;
        assert!(matches!(
            PolySpec::from_json_str(text),
            Err(GeomError::Parse { ref field, .. }) if field == "m"
        ));
    }

    #[test]
    fn exponent_length_diagnostic_points_at_line() {
        let text = "{\n\"m\": 2,\n\"n\": 3,\n\"domain\": [[0,1],[0,1]],\n\"components\": [\n[{\"c\": 1, \"e\": [1]}],\n[], []]}";
        match PolySpec::from_json_str(text) {
            Err(GeomError::Parse { line, field, .. }) => {
                assert_eq!(field, "components[0][0].e");
                assert_eq!(line, 6);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_json_reports_line() {
        let text = "{\n\"m\": 2,\n\"n\": ,\n}";
        match PolySpec::from_json_str(text) {
            Err(GeomError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
