//! JSON result records. The layout is described in `docs/result-schema.md`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Tolerances {
    pub atol: f64,
    pub rtol: f64,
    pub tol_opt: f64,
    pub support_cutoff: f64,
    /// Slack allowed on PSD gaps and scalar bounds checked by the lab.
    pub check_slack: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            atol: qcompound::ATOL,
            rtol: qcompound::RTOL,
            tol_opt: qcompound::TOL_OPT,
            support_cutoff: qcompound::SUPPORT_CUTOFF,
            check_slack: CHECK_SLACK,
        }
    }
}

/// Slack on PSD gaps and scalar inequalities.
pub const CHECK_SLACK: f64 = 1e-8;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Record {
    pub schema_version: u32,
    pub command: String,
    pub params: Value,
    pub tolerances: Tolerances,
    pub inputs: BTreeMap<String, InputDigest>,
    pub results: Value,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Record {
    pub fn new(command: &str, params: Value) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            params,
            tolerances: Tolerances::default(),
            inputs: BTreeMap::new(),
            results: Value::Null,
            checks: Vec::new(),
            pass: true,
        }
    }

    pub fn input(&mut self, name: &str, path: &Path, bytes: &[u8]) {
        self.inputs.insert(
            name.to_string(),
            InputDigest {
                path: path.display().to_string(),
                sha256: sha256_hex(bytes),
            },
        );
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: String) {
        self.pass &= pass;
        self.checks.push(Check {
            name: name.to_string(),
            pass,
            detail,
        });
    }

    pub fn failed_checks(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("records serialize");
        s.push('\n');
        s
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// JSON number, or the strings `"inf"`, `"-inf"`, `"nan"` for non-finite values.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else if x.is_nan() {
        Value::from("nan")
    } else if x > 0.0 {
        Value::from("inf")
    } else {
        Value::from("-inf")
    }
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().copied().map(num).collect())
}
