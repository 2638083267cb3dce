use std::fmt::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;

/// One checked relation on one input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    /// Which relation family the case belongs to.
    pub check: String,
    pub inputs: Value,
    pub expected: String,
    pub observed: Value,
    pub pass: bool,
}

impl CaseRecord {
    pub fn new(check: &str, inputs: Value, expected: impl Into<String>, observed: Value, pass: bool) -> Self {
        CaseRecord { check: check.to_string(), inputs, expected: expected.into(), observed, pass }
    }

    /// Runs `f`; an error becomes a failing case carrying the message.
    pub fn guarded(check: &str, inputs: Value, expected: impl Into<String>, f: impl FnOnce() -> Result<(Value, bool)>) -> Self {
        match f() {
            Ok((observed, pass)) => Self::new(check, inputs, expected, observed, pass),
            Err(e) => Self::new(check, inputs, expected, serde_json::json!({ "error": e.to_string() }), false),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub grid: Value,
    pub cases: Vec<CaseRecord>,
    /// Differences between the reference statements and what is implemented.
    /// They never affect `passed`.
    pub errata: Vec<String>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn new(name: &str, grid: Value, cases: Vec<CaseRecord>, errata: Vec<String>) -> Self {
        let passed = cases.iter().all(|c| c.pass);
        SuiteReport { name: name.to_string(), grid, cases, errata, passed }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseRecord> {
        self.cases.iter().filter(|c| !c.pass)
    }

    /// Cases whose `check` starts with `prefix`.
    pub fn cases_for<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a CaseRecord> + 'a {
        self.cases.iter().filter(move |c| c.check.starts_with(prefix))
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let status = if self.passed { "PASS" } else { "FAIL" };
        let failed = self.failures().count();
        writeln!(out, "suite {}: {status} ({} cases, {failed} failed)", self.name, self.cases.len()).unwrap();
        writeln!(out, "grid: {}", self.grid).unwrap();
        for c in &self.cases {
            let mark = if c.pass { "ok  " } else { "FAIL" };
            writeln!(out, "  [{mark}] {} {} expect {} got {}", c.check, c.inputs, c.expected, c.observed).unwrap();
        }
        for e in &self.errata {
            writeln!(out, "  erratum: {e}").unwrap();
        }
        out
    }
}
