//! Acceptance suite: one `[PASS]`/`[FAIL]` line per criterion.
//!
//! The process exits nonzero when a criterion fails for any reason other than
//! a counterexample to the statement being checked that the suite itself
//! identifies as such (reported in the suite's errata).

use std::process::ExitCode;
use std::time::{Duration, Instant};

use glhom::app::{run_suite, soundness, CaseRecord, SuiteParams, SuiteReport};
use glhom::exact::vp_int;
use glhom::nonmodular::hom_count;
use glhom::{AbelianPGroup, Exec};
use num_bigint::BigInt;

struct Outcome {
    passed: bool,
    detail: String,
    /// Failures are all counterexamples to the checked statement itself.
    statement_false: bool,
}

fn outcome(reports: &[&SuiteReport], filter: impl Fn(&CaseRecord) -> bool) -> Outcome {
    let mut total = 0;
    let mut failed = Vec::new();
    for r in reports {
        for c in r.cases.iter().filter(|c| filter(c)) {
            total += 1;
            if !c.pass {
                failed.push(format!("{} {} {} {}", r.name, c.check, c.inputs, c.observed));
            }
        }
    }
    let detail = if failed.is_empty() {
        format!("{total} cases")
    } else {
        let shown: Vec<_> = failed.iter().take(3).cloned().collect();
        format!("{} of {total} cases failed: {}", failed.len(), shown.join("; "))
    };
    Outcome { passed: failed.is_empty() && total > 0, detail, statement_false: false }
}

fn all(_: &CaseRecord) -> bool {
    true
}

fn suite(name: &str, params: &SuiteParams) -> SuiteReport {
    run_suite(name, params).expect("known suite")
}

fn group(p: u64, factors: &[u32]) -> AbelianPGroup {
    AbelianPGroup::from_factors(p, factors).unwrap()
}

fn criterion1(params: &SuiteParams) -> Outcome {
    let r = suite("table1", params);
    outcome(&[&r], |c| matches!(c.check.as_str(), "table1-b" | "table1-first" | "table1-main"))
}

fn criterion2(params: &SuiteParams) -> Outcome {
    let r = suite("cross-check", params);
    let mut o = outcome(&[&r], |c| c.check == "cross-nonmodular");
    let anchor = hom_count(&group(2, &[1]), 3, 2).map(|h| h.count);
    let anchor_ok = anchor.as_ref().is_ok_and(|c| *c == BigInt::from(14));
    let anchor_listed = r.cases.iter().any(|c| {
        c.check == "cross-nonmodular"
            && c.pass
            && c.inputs["group"] == "C_2"
            && c.inputs["q"] == 3
            && c.inputs["n"] == 2
            && c.observed["brute"] == "14"
    });
    if !(anchor_ok && anchor_listed) {
        o.passed = false;
        o.detail.push_str(&format!("; anchor #Hom(C_2, GL_2(F_3)) = {anchor:?}, listed: {anchor_listed}"));
    }
    o
}

fn criterion3(params: &SuiteParams) -> Outcome {
    let mut cells: Vec<(AbelianPGroup, u64)> = glhom::app::table1_rows()
        .iter()
        .map(|r| (group(r.p, r.factors), r.q))
        .collect();
    cells.push((group(2, &[3]), 3));
    cells.push((group(3, &[2, 1]), 7));
    let r = soundness(&cells, 24, params.exec);
    let mut o = outcome(&[&r], all);
    let tight_points = r
        .cases
        .iter()
        .filter(|c| c.observed["tight_modulus"].is_u64())
        .count();
    o.detail.push_str(&format!(", {tight_points} cells with an equality claim"));
    o
}

fn criterion4(params: &SuiteParams) -> Outcome {
    let r = suite("modular", params);
    outcome(&[&r], |c| matches!(c.check.as_str(), "modular-equivalence" | "modular-brute"))
}

fn criterion5(params: &SuiteParams) -> Outcome {
    let r = suite("modular", params);
    let mut o = outcome(&[&r], |c| matches!(c.check.as_str(), "modular-trailing" | "modular-hom"));
    let mut equalities = 0;
    for c in r.cases_for("modular-hom") {
        let (p, n) = (c.inputs["p"].as_u64().unwrap(), c.inputs["n"].as_u64().unwrap());
        let k = p.pow(c.inputs["u"].as_u64().unwrap() as u32);
        if n % (k + 1) <= 1 {
            let count: BigInt = c.observed["count"].as_str().unwrap_or("0").parse().unwrap();
            let bound: Option<i64> = c.observed["bound"].as_str().and_then(|b| b.parse().ok());
            if bound.is_some() && vp_int(&count, p).finite() == bound {
                equalities += 1;
            } else {
                o.passed = false;
            }
        }
    }
    o.detail.push_str(&format!(", {equalities} equality points"));
    o
}

fn criterion6(params: &SuiteParams) -> Outcome {
    let pn = suite("pn-roots", params);
    let qn = suite("qn", params);
    outcome(&[&pn, &qn], |c| c.check != "pn-h")
}

fn criterion7(params: &SuiteParams) -> Outcome {
    let reports: Vec<SuiteReport> =
        ["case1", "case2", "cased", "pinfty", "dwork"].iter().map(|n| suite(n, params)).collect();
    outcome(&reports.iter().collect::<Vec<_>>(), all)
}

fn criterion8(params: &SuiteParams) -> Outcome {
    let reports: Vec<SuiteReport> = ["moebius", "harmonic", "binomial2", "exp-pdiv", "special2", "lambda"]
        .iter()
        .map(|n| suite(n, params))
        .collect();
    let mut o = outcome(&reports.iter().collect::<Vec<_>>(), all);
    let randomized = ["moebius", "exp-pdiv", "special2", "lambda"];
    for r in &reports {
        if randomized.contains(&r.name.as_str()) && r.cases.len() < 200 {
            o.passed = false;
            o.detail.push_str(&format!("; {} has only {} cases", r.name, r.cases.len()));
        }
    }
    if !o.passed {
        let only_exp_pdiv = reports.iter().filter(|r| !r.passed).all(|r| r.name == "exp-pdiv");
        let exp = reports.iter().find(|r| r.name == "exp-pdiv").unwrap();
        let statement_false = exp.failures().all(|c| {
            c.inputs["b"] == 0 && c.observed["below_bound_n"].as_array().is_some_and(|v| v.is_empty())
        });
        if only_exp_pdiv && statement_false && !exp.errata.is_empty() {
            o.statement_false = true;
            o.detail.push_str(&format!("; erratum: {}", exp.errata[0]));
        }
    }
    o
}

type Criterion = (&'static str, Option<Duration>, fn(&SuiteParams) -> Outcome);

fn main() -> ExitCode {
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let params = SuiteParams { exec: Exec::default(), ..SuiteParams::default() };
    let criteria: [Criterion; 8] = [
        ("reference table reproduction", Some(Duration::from_secs(60)), criterion1),
        ("non-modular oracle equivalence", Some(Duration::from_secs(120)), criterion2),
        ("bound soundness and tightness", None, criterion3),
        ("modular triple equivalence", Some(Duration::from_secs(60)), criterion4),
        ("quadratic valuation law", None, criterion5),
        ("polynomial-family identities", None, criterion6),
        ("series divisibility suites", Some(Duration::from_secs(120)), criterion7),
        ("property suites", None, criterion8),
    ];
    let mut unexpected = 0;
    let mut passed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut o = run(&params);
        let elapsed = start.elapsed();
        if let Some(limit) = limit {
            if elapsed > *limit {
                o.passed = false;
                o.statement_false = false;
                o.detail.push_str(&format!("; runtime {elapsed:.1?} exceeds {limit:?}"));
            }
        }
        let mark = if o.passed { "PASS" } else { "FAIL" };
        println!("[{mark}] criterion {}: {name} ({:.2}s) {}", i + 1, elapsed.as_secs_f64(), o.detail);
        if o.passed {
            passed += 1;
        } else if !o.statement_false {
            unexpected += 1;
        }
    }
    println!("{passed}/{} criteria passed, {unexpected} unexpected failures", criteria.len());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
