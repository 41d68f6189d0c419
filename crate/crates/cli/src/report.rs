use std::fmt::Write as _;
use std::path::Path;

use cqstar::report::Check;
use cqstar::Tolerances64;
use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

pub const TOOL: &str = "cqstar";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Process exit status: 0 pass, 1 a mathematical check failed, 2 input error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass = 0,
    Fail = 1,
    Error = 2,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    /// `None` when the file cannot be read; the read error is reported by
    /// the command itself.
    pub fn of(path: &Path) -> Option<Self> {
        let bytes = std::fs::read(path).ok()?;
        Some(Self {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        })
    }
}

/// Results for one input (or one sweep point).
#[derive(Debug, Clone, Serialize)]
pub struct Entry {
    pub label: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub checks: Vec<Check>,
    pub data: Map<String, Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Entry {
    pub fn new(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            status: Status::Pass,
            error: None,
            checks: Vec::new(),
            data: Map::new(),
            notes: Vec::new(),
        }
    }

    pub fn error(label: impl Into<String>, message: impl Into<String>) -> Self {
        let mut e = Self::new(label);
        e.status = Status::Error;
        e.error = Some(message.into());
        e
    }

    pub fn checks(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.data.insert(
            key.to_string(),
            serde_json::to_value(value).unwrap_or(Value::Null),
        );
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Fails the entry outright, e.g. when a prerequisite check failed and
    /// later stages were skipped.
    pub fn fail(&mut self, message: impl Into<String>) {
        self.error = Some(message.into());
        self.status = self.status.max(Status::Fail);
    }

    pub fn finish(mut self) -> Self {
        if self.status != Status::Error && self.checks.iter().any(|c| !c.passed) {
            self.status = Status::Fail;
        }
        self
    }

    pub fn failures(&self) -> Vec<&str> {
        cqstar::report::failures(&self.checks)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TolSummary {
    pub eq: f64,
    pub herm: f64,
    pub pd: f64,
    pub rank: f64,
    pub ineq: f64,
}

impl From<&Tolerances64> for TolSummary {
    fn from(t: &Tolerances64) -> Self {
        Self {
            eq: t.eq,
            herm: t.herm,
            pd: t.pd,
            rank: t.rank,
            ineq: t.ineq,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub tolerances: TolSummary,
    pub inputs: Vec<InputDigest>,
    pub status: Status,
    pub results: Vec<Entry>,
}

impl Report {
    pub fn new(
        command: &str,
        tol: &Tolerances64,
        inputs: Vec<InputDigest>,
        results: Vec<Entry>,
    ) -> Self {
        let status = results
            .iter()
            .map(|e| e.status)
            .max()
            .unwrap_or(Status::Pass);
        Self {
            tool: TOOL,
            version: VERSION,
            command: command.to_string(),
            tolerances: tol.into(),
            inputs,
            status,
            results,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).unwrap_or_default();
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} {}", self.tool, self.version, self.command);
        for i in &self.inputs {
            let _ = writeln!(out, "input {} sha256 {}", i.path, i.sha256);
        }
        for e in &self.results {
            let _ = writeln!(out, "\n[{}] {}", status_word(e.status), e.label);
            if let Some(err) = &e.error {
                let _ = writeln!(out, "  error: {err}");
            }
            let width = e.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
            for c in &e.checks {
                let _ = write!(
                    out,
                    "  {} {:width$}  residual {:.3e}  tol {:.1e}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.residual,
                    c.tolerance,
                );
                if let Some(note) = &c.note {
                    let _ = write!(out, "  ({note})");
                }
                out.push('\n');
            }
            for (k, v) in &e.data {
                let _ = writeln!(out, "  {k}: {v}");
            }
            for n in &e.notes {
                let _ = writeln!(out, "  note: {n}");
            }
        }
        let _ = writeln!(out, "\nresult: {}", status_word(self.status));
        out
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Error => "ERROR",
    }
}
