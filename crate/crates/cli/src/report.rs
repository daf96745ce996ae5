//! Reports: a JSON document plus a text rendering, and the verdicts they carry.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

/// How a verdict is backed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Evidence {
    /// An exact computation over every relevant degree, or an explicit witness.
    Certificate { reference: String },
    /// Exact in each scanned degree, but only the window was scanned.
    ObservedInWindow { window: usize },
}

impl Evidence {
    pub fn cert(reference: impl Into<String>) -> Self {
        Evidence::Certificate { reference: reference.into() }
    }

    fn describe(&self) -> String {
        match self {
            Evidence::Certificate { reference } => format!("certificate: {reference}"),
            Evidence::ObservedInWindow { window } => format!("observed-in-window (i+j <= {window})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub assertion: String,
    pub holds: bool,
    pub evidence: Evidence,
    /// First violated instance (bidegree, candidate, tuple, ...).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl Verdict {
    pub fn new(assertion: impl Into<String>, failure: Option<String>, evidence: Evidence) -> Self {
        Verdict { assertion: assertion.into(), holds: failure.is_none(), evidence, failure }
    }

    pub fn line(&self) -> String {
        let mut s = format!("[{}] {} ({})", if self.holds { "ok" } else { "FAILED" }, self.assertion, self.evidence.describe());
        if let Some(f) = &self.failure {
            let _ = write!(s, "\n       first violation: {f}");
        }
        s
    }
}

/// A finished command result.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub target: String,
    sections: Vec<(String, Value, String)>,
    pub verdicts: Vec<Verdict>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &str, target: &str) -> Self {
        Report { command: command.into(), target: target.into(), sections: Vec::new(), verdicts: Vec::new(), warnings: Vec::new() }
    }

    pub fn section(&mut self, key: &str, value: Value, text: String) {
        self.sections.push((key.into(), value, text));
    }

    pub fn verdict(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    pub fn sections_owned(self) -> Vec<(String, Value, String)> {
        self.sections
    }

    pub fn first_failure(&self) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| !v.holds)
    }

    pub fn to_json(&self) -> Value {
        let mut obj = serde_json::Map::new();
        obj.insert("command".into(), json!(self.command));
        obj.insert("target".into(), json!(self.target));
        for (k, v, _) in &self.sections {
            obj.insert(k.clone(), v.clone());
        }
        if !self.verdicts.is_empty() {
            obj.insert("verdicts".into(), serde_json::to_value(&self.verdicts).expect("serializable"));
        }
        if !self.warnings.is_empty() {
            obj.insert("warnings".into(), json!(self.warnings));
        }
        Value::Object(obj)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("== {} {} ==\n", self.command, self.target);
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        for (k, _, text) in &self.sections {
            if text.is_empty() {
                continue;
            }
            let _ = writeln!(out, "\n-- {k} --");
            out.push_str(text);
            if !text.ends_with('\n') {
                out.push('\n');
            }
        }
        if !self.verdicts.is_empty() {
            out.push_str("\n-- verdicts --\n");
            for v in &self.verdicts {
                let _ = writeln!(out, "{}", v.line());
            }
        }
        out
    }
}
