use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::RunConfig;

/// One verified identity or threshold.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub lhs: Value,
    pub rhs: Value,
    pub error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// `|lhs - rhs| <= tolerance`.
    pub fn compare(name: impl Into<String>, lhs: Complex64, rhs: Complex64, tolerance: f64) -> Self {
        let error = (lhs - rhs).norm();
        Self {
            name: name.into(),
            lhs: complex_value(lhs),
            rhs: complex_value(rhs),
            error,
            tolerance,
            pass: error <= tolerance,
        }
    }

    /// A pass/fail flag with the measured value recorded in `lhs`.
    pub fn flag(name: impl Into<String>, value: f64, tolerance: f64, pass: bool) -> Self {
        Self {
            name: name.into(),
            lhs: json!(value),
            rhs: Value::Null,
            error: value,
            tolerance,
            pass,
        }
    }
}

pub fn complex_value(z: Complex64) -> Value {
    if z.im == 0.0 {
        json!(z.re)
    } else {
        json!([z.re, z.im])
    }
}

/// Machine-readable outcome of one command.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub results: Value,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl Report {
    pub fn new(config: &RunConfig, results: Value, checks: Vec<Check>) -> Self {
        Self {
            command: config.command.clone(),
            config: config.clone(),
            results,
            pass: checks.iter().all(|c| c.pass),
            checks,
            wall_time_s: None,
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
