//! Machine-readable verification reports.
//!
//! A report is deterministic for a fixed command line: parameters are kept in
//! a sorted map and every detail string is derived from exact arithmetic, so
//! rerunning with the same seed produces byte-identical JSON.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Outcome of a single check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "EXACT_ZERO")]
    ExactZero,
    #[serde(rename = "RANK_OK")]
    RankOk,
    #[serde(rename = "MATCH")]
    Match,
    #[serde(rename = "FINDING")]
    Finding,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::ExactZero => "EXACT_ZERO",
            Status::RankOk => "RANK_OK",
            Status::Match => "MATCH",
            Status::Finding => "FINDING",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub status: Status,
    pub details: String,
}

/// Provenance of one discrepancy, with an optional repair suggestion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Finding {
    pub check: String,
    pub location: String,
    pub term: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monomial: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficient: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suggestion: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub tool: ToolInfo,
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub checks: Vec<CheckRecord>,
    pub findings: Vec<Finding>,
    pub status: String,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            tool: ToolInfo {
                name: "kdirac".to_string(),
                version: env!("CARGO_PKG_VERSION").to_string(),
            },
            command: command.to_string(),
            parameters: BTreeMap::new(),
            checks: Vec::new(),
            findings: Vec::new(),
            status: "PASS".to_string(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl fmt::Display) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    pub fn push_check(&mut self, id: &str, status: Status, details: impl Into<String>) {
        self.checks.push(CheckRecord {
            id: id.to_string(),
            status,
            details: details.into(),
        });
    }

    pub fn push_finding(&mut self, finding: Finding) {
        self.findings.push(finding);
    }

    /// Recomputes the overall status from the recorded checks.
    pub fn finalize(&mut self) {
        let pass = self.checks.iter().all(|c| c.status != Status::Finding) && self.findings.is_empty();
        self.status = if pass { "PASS" } else { "FINDING" }.to_string();
    }

    pub fn all_pass(&self) -> bool {
        self.status == "PASS"
    }

    /// Pretty JSON with a trailing newline, stable for byte comparison.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// A human-readable table for stdout.
    pub fn human_table(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("{} {}\n", self.tool.name, self.command));
        for (k, v) in &self.parameters {
            s.push_str(&format!("  {k} = {v}\n"));
        }
        let width = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
        for c in &self.checks {
            s.push_str(&format!(
                "  {:width$}  {:10}  {}\n",
                c.id,
                c.status.to_string(),
                c.details,
                width = width
            ));
        }
        for f in &self.findings {
            s.push_str(&format!("  FINDING in {} at {}: {}\n", f.check, f.location, f.term));
            if let Some(mono) = &f.monomial {
                s.push_str(&format!("    monomial    {mono}\n"));
            }
            if let Some(c) = &f.coefficient {
                s.push_str(&format!("    coefficient {c}\n"));
            }
            if let Some(sg) = &f.suggestion {
                s.push_str(&format!("    suggestion  {sg}\n"));
            }
        }
        s.push_str(&format!("  status: {}\n", self.status));
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_round_trips_through_json() {
        let mut r = Report::new("verify complex");
        r.param("k", 2);
        r.param("n", 4);
        r.param("seed", 7u64);
        r.push_check("D2D1", Status::ExactZero, "10 sections, all zero");
        r.push_finding(Finding {
            check: "D8D7".to_string(),
            location: "[out <- hs13]".to_string(),
            term: "-1 * d3 d1 hs13".to_string(),
            monomial: None,
            coefficient: Some("2".to_string()),
            suggestion: Some("word d3 d1 -> d1 d3".to_string()),
        });
        r.finalize();
        assert_eq!(r.status, "FINDING");
        let json = r.to_json();
        assert!(json.ends_with('\n'));
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_json(), json);
        assert_eq!(back.checks[0].status, Status::ExactZero);
        assert_eq!(back.findings[0].suggestion.as_deref(), Some("word d3 d1 -> d1 d3"));
    }

    #[test]
    fn status_strings_are_stable() {
        assert_eq!(serde_json::to_string(&Status::ExactZero).unwrap(), "\"EXACT_ZERO\"");
        assert_eq!(serde_json::to_string(&Status::RankOk).unwrap(), "\"RANK_OK\"");
        assert_eq!(serde_json::to_string(&Status::Match).unwrap(), "\"MATCH\"");
        assert_eq!(serde_json::to_string(&Status::Finding).unwrap(), "\"FINDING\"");
    }

    #[test]
    fn finalize_passes_without_findings() {
        let mut r = Report::new("verify symbol");
        r.push_check("rank-profile", Status::RankOk, "50 samples");
        r.finalize();
        assert!(r.all_pass());
        assert!(r.human_table().contains("rank-profile"));
    }
}
