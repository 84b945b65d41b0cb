use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Finding,
}

/// How a measured value is compared with its threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Comparison {
    #[serde(rename = "<")]
    Below,
    #[serde(rename = ">")]
    Above,
    #[serde(rename = "==")]
    Equal,
}

impl Comparison {
    pub fn holds(self, value: f64, threshold: f64) -> bool {
        match self {
            Comparison::Below => value < threshold,
            Comparison::Above => value > threshold,
            Comparison::Equal => value == threshold,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub value: f64,
    pub comparison: Comparison,
    pub threshold: f64,
}

impl Check {
    /// Hard check: fails the run when the comparison does not hold.
    pub fn hard(name: &str, value: f64, comparison: Comparison, threshold: f64) -> Self {
        let status = if comparison.holds(value, threshold) {
            Status::Pass
        } else {
            Status::Fail
        };
        Check {
            name: name.to_owned(),
            status,
            value,
            comparison,
            threshold,
        }
    }

    /// Soft check: a mismatch is reported as a finding, never a failure.
    pub fn soft(name: &str, value: f64, comparison: Comparison, threshold: f64) -> Self {
        let status = if comparison.holds(value, threshold) {
            Status::Pass
        } else {
            Status::Finding
        };
        Check {
            name: name.to_owned(),
            status,
            value,
            comparison,
            threshold,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Finding {
    pub name: String,
    pub summary: String,
    pub data: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub a: f64,
    pub m: f64,
    pub n: f64,
    pub r: f64,
    pub s: f64,
    pub seed: u64,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub flat: bool,
    pub tolerances: BTreeMap<String, f64>,
    pub out: Option<String>,
    pub csv: Option<String>,
}

/// Field order is the report's key order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub config: ConfigEcho,
    pub checks: Vec<Check>,
    pub findings: Vec<Finding>,
    pub version: String,
    pub duration_ms: u64,
}

impl Report {
    pub fn any_failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
