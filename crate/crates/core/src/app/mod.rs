//! Verification suites, their reports, and the command-line front end.

pub mod cli;
mod report;
mod suites;

pub use report::{CaseRecord, SuiteReport};
pub use suites::{soundness, table1_rows, Table1Row, SAMPLE_GRID};

use crate::error::{Error, Result};
use crate::exec::Exec;

/// Every suite name accepted by [`run_suite`].
pub const SUITE_NAMES: &[&str] = &[
    "case1", "case2", "cased", "pinfty", "dwork", "pn-roots", "qn", "moebius", "harmonic", "binomial2",
    "exp-pdiv", "special2", "table1", "soundness", "lambda", "modular", "cross-check",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteParams {
    /// Truncation order for series suites.
    pub trunc: usize,
    pub seed: u64,
    /// Overrides the number of randomized cases or the size of a range grid.
    pub cases: Option<usize>,
    pub exec: Exec,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams { trunc: crate::qseries::DEFAULT_ORDER, seed: 0, cases: None, exec: Exec::default() }
    }
}

impl SuiteParams {
    pub(crate) fn cases_or(&self, default: usize) -> usize {
        self.cases.unwrap_or(default)
    }
}

pub fn run_suite(name: &str, params: &SuiteParams) -> Result<SuiteReport> {
    use suites::*;
    let report = match name {
        "case1" => case1(params),
        "case2" => case2(params),
        "cased" => cased(params),
        "pinfty" => pinfty(params),
        "dwork" => dwork(params),
        "pn-roots" => pn_roots(params),
        "qn" => qn(params),
        "moebius" => moebius(params),
        "harmonic" => harmonic(params),
        "binomial2" => binomial2(params),
        "exp-pdiv" => exp_pdiv(params),
        "special2" => special2(params),
        "table1" => table1(params),
        "soundness" => default_soundness(params),
        "lambda" => lambda(params),
        "modular" => modular(params),
        "cross-check" => cross_check(params),
        other => return Err(Error::Input(format!("unknown suite {other:?}; known: {}", SUITE_NAMES.join(", ")))),
    };
    Ok(report)
}
