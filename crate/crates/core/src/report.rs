//! Structured verification outcomes, serialized as JSON Lines or a
//! plain table. Exact rationals are carried as strings, never floats.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// Outcome of a single check. Failures always carry a witness (the
/// offending value); numeric passes carry the residual bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub check_id: String,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn new(check_id: impl Into<String>) -> ReportBuilder {
        ReportBuilder { check_id: check_id.into(), params: BTreeMap::new() }
    }

    pub fn is_fail(&self) -> bool {
        self.status == Status::Fail
    }

    /// Stable ordering key: check id, then the parameter map.
    pub fn sort_key(&self) -> (String, Vec<(String, String)>) {
        (
            self.check_id.clone(),
            self.params.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization")
    }

    pub fn table_row(&self) -> String {
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{}={}", k, v)).collect();
        let mut row = format!("{:<4} {:<34} {}", status, self.check_id, params.join(" "));
        if let Some(w) = &self.witness {
            row.push_str(&format!("  [{}]", w));
        }
        row
    }
}

/// Builder carrying the parameter map.
pub struct ReportBuilder {
    check_id: String,
    params: BTreeMap<String, String>,
}

impl ReportBuilder {
    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn finish(self, status: Status, witness: Option<String>, elapsed_ms: u64) -> Report {
        debug_assert!(status != Status::Fail || witness.is_some(), "failures need a witness");
        Report { check_id: self.check_id, params: self.params, status, witness, elapsed_ms }
    }

    /// Pass/fail from a boolean, with the witness attached on failure.
    pub fn verdict(self, ok: bool, witness: String, elapsed_ms: u64) -> Report {
        if ok {
            Report {
                check_id: self.check_id,
                params: self.params,
                status: Status::Pass,
                witness: None,
                elapsed_ms,
            }
        } else {
            Report {
                check_id: self.check_id,
                params: self.params,
                status: Status::Fail,
                witness: Some(witness),
                elapsed_ms,
            }
        }
    }

    /// Numeric verdict: pass keeps the residual bound as witness.
    pub fn numeric_verdict(self, ok: bool, residual: String, elapsed_ms: u64) -> Report {
        Report {
            check_id: self.check_id,
            params: self.params,
            status: if ok { Status::Pass } else { Status::Fail },
            witness: Some(residual),
            elapsed_ms,
        }
    }
}
