//! Machine-readable verification reports and the run configuration.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One verified identity. `reference` names the mathematical statement being
/// checked; `computed`/`expected` are scalars or labels rendered as JSON.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub id: String,
    #[serde(rename = "ref")]
    pub reference: String,
    pub computed: serde_json::Value,
    pub expected: serde_json::Value,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRecord {
    /// Scalar check |computed - expected| <= tolerance.
    pub fn scalar(
        id: impl Into<String>,
        reference: impl Into<String>,
        computed: f64,
        expected: f64,
        tolerance: f64,
    ) -> Self {
        CheckRecord {
            id: id.into(),
            reference: reference.into(),
            computed: serde_json::json!(computed),
            expected: serde_json::json!(expected),
            tolerance,
            pass: (computed - expected).abs() <= tolerance,
        }
    }

    /// A defect that must stay below the tolerance.
    pub fn residual(
        id: impl Into<String>,
        reference: impl Into<String>,
        defect: f64,
        tolerance: f64,
    ) -> Self {
        CheckRecord {
            id: id.into(),
            reference: reference.into(),
            computed: serde_json::json!(defect),
            expected: serde_json::json!(0.0),
            tolerance,
            pass: defect.abs() <= tolerance,
        }
    }

    /// An exact (integer or boolean) statement.
    pub fn exact(id: impl Into<String>, reference: impl Into<String>, pass: bool) -> Self {
        CheckRecord {
            id: id.into(),
            reference: reference.into(),
            computed: serde_json::json!(pass),
            expected: serde_json::json!(true),
            tolerance: 0.0,
            pass,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub records: Vec<CheckRecord>,
    pub pass: bool,
    pub wall_ms: u128,
}

impl Report {
    pub fn from_records(suite: impl Into<String>, records: Vec<CheckRecord>, start: Instant) -> Self {
        Report {
            suite: suite.into(),
            pass: records.iter().all(|r| r.pass),
            records,
            wall_ms: start.elapsed().as_millis(),
        }
    }
}

/// Aggregate of several suites; the process exit code is 0 iff `pass`.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub suites: Vec<Report>,
    pub pass: bool,
    pub wall_ms: u128,
}

/// Run configuration (JSON file plus command-line overrides).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Per-suite tolerance scaling overrides (1.0 = the built-in defaults).
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub out: Option<String>,
    /// Suites to run; empty means the full set.
    #[serde(default)]
    pub suites: Vec<String>,
    #[serde(default = "default_jobs")]
    pub jobs: usize,
}

fn default_seed() -> u64 {
    7
}

fn default_jobs() -> usize {
    1
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tolerances: BTreeMap::new(),
            seed: default_seed(),
            out: None,
            suites: Vec::new(),
            jobs: 1,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        for (k, v) in &self.tolerances {
            if !(*v > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "tolerance override '{k}' must be positive, got {v}"
                )));
            }
        }
        if self.jobs == 0 {
            return Err(Error::InvalidConfig("jobs must be >= 1".into()));
        }
        Ok(())
    }

    pub fn tol(&self, suite: &str, base: f64) -> f64 {
        base * self.tolerances.get(suite).copied().unwrap_or(1.0)
    }
}
