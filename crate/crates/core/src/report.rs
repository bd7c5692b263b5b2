//! Machine-readable reports written by the CLI.
//!
//! A report is a single JSON object, pretty-printed with one key per line:
//!
//! ```text
//! {
//!   "operation": "pipeline",
//!   "inputs_digest": "<sha256 of the input files, optional>",
//!   "values": { ...operation specific measurements... },
//!   "checks": [
//!     { "name": "...", "source": "2k-1", "measured": 3, "bound": 3, "passed": true }
//!   ],
//!   "passed": true
//! }
//! ```
//!
//! Every check names the constant its bound comes from in `source`.

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub source: String,
    pub measured: u64,
    pub bound: u64,
    pub passed: bool,
}

impl Check {
    /// `measured <= bound`.
    pub fn at_most(name: impl Into<String>, source: impl Into<String>, measured: u64, bound: u64) -> Self {
        Check { name: name.into(), source: source.into(), measured, bound, passed: measured <= bound }
    }

    /// A yes/no property; recorded as measured 1 (holds) or 0 against bound 1.
    pub fn holds(name: impl Into<String>, source: impl Into<String>, ok: bool) -> Self {
        Check { name: name.into(), source: source.into(), measured: ok as u64, bound: 1, passed: ok }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub operation: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inputs_digest: Option<String>,
    pub values: Map<String, Value>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Report {
    pub fn new(operation: impl Into<String>) -> Self {
        Report { operation: operation.into(), inputs_digest: None, values: Map::new(), checks: Vec::new(), passed: true }
    }

    pub fn value(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).expect("report values serialize");
        self.values.insert(key.to_string(), v);
        self
    }

    pub fn check(&mut self, check: Check) -> &mut Self {
        self.passed &= check.passed;
        self.checks.push(check);
        self
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
