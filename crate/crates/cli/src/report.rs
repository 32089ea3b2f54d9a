use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

use helixlab_core::check::Check;

use crate::config::RunConfig;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub pass: bool,
}

impl Summary {
    pub fn of(records: &[Check]) -> Summary {
        let passed = records.iter().filter(|c| c.pass).count();
        Summary {
            total: records.len(),
            passed,
            failed: records.len() - passed,
            pass: passed == records.len(),
        }
    }
}

/// Records are checks with a pass/fail outcome; observations are measured
/// properties (angles, flags) that are reported but not judged.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub version: String,
    pub command: String,
    pub config: RunConfig,
    pub records: Vec<Check>,
    pub observations: BTreeMap<String, Value>,
    pub summary: Summary,
    pub wall_time_ms: u64,
}

impl Report {
    pub fn new(
        config: &RunConfig,
        records: Vec<Check>,
        observations: BTreeMap<String, Value>,
        elapsed: Duration,
    ) -> Report {
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: config.command.name().to_string(),
            config: config.clone(),
            summary: Summary::of(&records),
            records,
            observations,
            wall_time_ms: elapsed.as_millis() as u64,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with the wall time zeroed: identical for identical runs.
    pub fn canonical_json(&self) -> String {
        let mut copy = self.clone();
        copy.wall_time_ms = 0;
        copy.to_json()
    }

    pub fn table(&self) -> String {
        let width = self
            .records
            .iter()
            .map(|c| c.name.chars().count())
            .max()
            .unwrap_or(4)
            .max(4);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<width$}  {:<30}  {:>13}  {:>13}  {:>10}  result",
            "name", "anchor", "lhs", "rhs", "residual"
        );
        for c in &self.records {
            let _ = writeln!(
                out,
                "{:<width$}  {:<30}  {:>13.6e}  {:>13.6e}  {:>10.2e}  {}",
                c.name,
                c.paper_anchor,
                c.lhs,
                c.rhs,
                c.residual,
                if c.pass { "PASS" } else { "FAIL" }
            );
        }
        for (k, v) in &self.observations {
            let _ = writeln!(out, "  {k} = {v}");
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "{}: {}/{} passed ({} ms)",
            self.command, s.passed, s.total, self.wall_time_ms
        );
        out
    }
}
