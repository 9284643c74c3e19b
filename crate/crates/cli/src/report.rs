//! Machine-readable run reports.
//!
//! A report is `{command, params, checks, summary}`; each check is one
//! named pass/fail/skip record with its two sides serialized as decimal
//! strings at 12 significant digits, keeping reports diff-stable across
//! runs (only `elapsed_ms` varies).

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    pub lhs: String,
    pub rhs: String,
    pub tolerance: String,
    pub elapsed_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    /// Echo of every parameter that influenced the run, seed included.
    pub params: BTreeMap<String, String>,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
    /// Construction payload (`construct` subcommands only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub construction: Option<ConstructionPayload>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstructionPayload {
    pub kind: String,
    pub q: u32,
    pub d: usize,
    pub a_size: u64,
    pub b_size: u64,
    pub radii: Vec<u32>,
    pub span_dim: usize,
    pub section_dim: usize,
    pub epsilon_implied: String,
    /// Point coordinates, included only for small sets.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_points: Option<Vec<Vec<u32>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_points: Option<Vec<Vec<u32>>>,
}

/// Decimal string with 12 significant digits.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{:.11e}", x);
    // normalize "1.23400000000e2" -> plain decimal when reasonable
    match s.split_once('e') {
        Some((mant, exp)) => {
            let e: i32 = exp.parse().unwrap_or(0);
            if (-4..12).contains(&e) {
                let digits = 11 - e;
                let prec = digits.max(0) as usize;
                let t = format!("{:.*}", prec, x);
                trim_zeros(&t)
            } else {
                format!("{}e{}", trim_zeros(mant), e)
            }
        }
        None => trim_zeros(&s),
    }
}

fn trim_zeros(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    let t = s.trim_end_matches('0');
    t.trim_end_matches('.').to_string()
}

impl Report {
    pub fn new(command: impl Into<String>, params: BTreeMap<String, String>) -> Report {
        Report {
            command: command.into(),
            params,
            checks: Vec::new(),
            summary: Summary::default(),
            construction: None,
        }
    }

    pub fn push(&mut self, check: CheckRecord) {
        match check.status {
            Status::Pass => self.summary.pass += 1,
            Status::Fail => self.summary.fail += 1,
            Status::Skip => self.summary.skip += 1,
        }
        self.checks.push(check);
    }

    pub fn merge(&mut self, other: Report) {
        for c in other.checks {
            self.push(c);
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.summary.fail > 0 {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    /// Flat CSV: one row per check.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("command,name,status,lhs,rhs,tolerance,elapsed_ms\n");
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::Skip => "skip",
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                csv_field(&self.command),
                csv_field(&c.name),
                status,
                csv_field(&c.lhs),
                csv_field(&c.rhs),
                csv_field(&c.tolerance),
                c.elapsed_ms
            ));
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Builder for one timed check.
pub struct Check {
    name: String,
    start: std::time::Instant,
}

impl Check {
    pub fn start(name: impl Into<String>) -> Check {
        Check { name: name.into(), start: std::time::Instant::now() }
    }

    fn record(self, status: Status, lhs: String, rhs: String, tol: &str, note: Option<String>) -> CheckRecord {
        CheckRecord {
            name: self.name,
            status,
            lhs,
            rhs,
            tolerance: tol.to_string(),
            elapsed_ms: self.start.elapsed().as_millis() as u64,
            note,
        }
    }

    /// `lhs <= rhs` within no tolerance (exact comparison already done).
    pub fn done(self, pass: bool, lhs: f64, rhs: f64, tol: &str) -> CheckRecord {
        let status = if pass { Status::Pass } else { Status::Fail };
        self.record(status, sig12(lhs), sig12(rhs), tol, None)
    }

    pub fn done_exact(self, pass: bool, lhs: u128, rhs: u128) -> CheckRecord {
        let status = if pass { Status::Pass } else { Status::Fail };
        self.record(status, lhs.to_string(), rhs.to_string(), "0", None)
    }

    pub fn skip(self, reason: impl Into<String>) -> CheckRecord {
        self.record(Status::Skip, String::new(), String::new(), "", Some(reason.into()))
    }
}
