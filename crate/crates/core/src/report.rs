//! Tabular experiment reports with named invariant checks.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;

/// One invariant evaluated by a runner. `passed` means `value <= limit`
/// unless the check says otherwise in its name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub limit: f64,
}

impl Check {
    /// Passes when `value <= limit`.
    pub fn at_most(name: &str, value: f64, limit: f64) -> Self {
        Self {
            name: name.to_string(),
            passed: value <= limit,
            value,
            limit,
        }
    }

    /// Passes when `value == expected` exactly.
    pub fn equals(name: &str, value: f64, expected: f64) -> Self {
        Self {
            name: name.to_string(),
            passed: value == expected,
            value,
            limit: expected,
        }
    }

    pub fn holds(name: &str, ok: bool) -> Self {
        Self {
            name: name.to_string(),
            passed: ok,
            value: if ok { 1.0 } else { 0.0 },
            limit: 1.0,
        }
    }
}

/// Deterministic given `(name, parameters)`; carries no wall-clock data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub parameters: BTreeMap<String, Value>,
    pub metadata: BTreeMap<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub checks: Vec<Check>,
}

impl ExperimentReport {
    pub fn new<P: Serialize>(name: &str, params: &P, columns: &[&str]) -> Result<Self> {
        let parameters = match serde_json::to_value(params)? {
            Value::Object(m) => m.into_iter().collect(),
            other => BTreeMap::from([("value".to_string(), other)]),
        };
        Ok(Self {
            name: name.to_string(),
            parameters,
            metadata: BTreeMap::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            checks: Vec::new(),
        })
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Value>) {
        self.metadata.insert(key.to_string(), value.into());
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Header row, then one line per row in round-trip float syntax. Non-finite
    /// values print as `NaN`/`inf`.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|v| format!("{v:?}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Independent generator for one `(stream)` of a seeded experiment.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
