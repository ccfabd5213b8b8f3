use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    /// A resource ceiling stopped the check before it could decide.
    #[serde(rename = "skipped(resource)")]
    SkippedResource,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::SkippedResource => "SKIP",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub computed: Value,
    pub expected: Value,
    /// Only filled with `--timings`, so default reports stay reproducible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub artifact_version: String,
    pub command: String,
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn new(command: &str) -> Self {
        VerificationReport { artifact_version: ARTIFACT_VERSION.to_string(), command: command.to_string(), checks: Vec::new() }
    }

    /// 0 all pass, 1 any failure, 2 incomplete.
    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().any(|c| c.status == Status::Fail) {
            1
        } else if self.checks.iter().any(|c| c.status == Status::SkippedResource) {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let width = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
        let mut out = String::new();
        for c in &self.checks {
            let _ = write!(out, "{}  {:<width$}  {}", c.status.label(), c.id, c.anchor);
            if let Some(ms) = c.runtime_ms {
                let _ = write!(out, "  ({ms} ms)");
            }
            out.push('\n');
        }
        let count = |s: Status| self.checks.iter().filter(|c| c.status == s).count();
        let _ = writeln!(
            out,
            "{} checks: {} pass, {} fail, {} skipped",
            self.checks.len(),
            count(Status::Pass),
            count(Status::Fail),
            count(Status::SkippedResource)
        );
        out
    }
}
