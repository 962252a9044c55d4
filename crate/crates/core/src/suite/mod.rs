//! The invariant suite behind `heckeft verify` and the acceptance test. Each
//! check carries the criterion it belongs to and the statement it exercises.

mod cosets;
mod expansion;
mod goss;
mod hecke;

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::error::Result;
use crate::field::Field;
use crate::lattice::Budget;
use crate::poly::PolyA;

pub use cosets::coset_checks;
pub use expansion::{expansion_checks, nonexample_checks};
pub use goss::goss_checks;
pub use hecke::hecke_checks;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    /// The statement being exercised, in words.
    pub statement: &'static str,
    pub passed: bool,
    pub detail: String,
    /// Set when the statement contradicts another checked statement; such a
    /// failure is reported as XFAIL and does not fail the suite.
    pub conflict: Option<&'static str>,
}

impl Check {
    pub fn with_conflict(mut self, why: &'static str) -> Self {
        self.conflict = Some(why);
        self
    }

    /// Passed, or failed with a documented conflict.
    pub fn ok(&self) -> bool {
        self.passed || self.conflict.is_some()
    }

    pub fn status(&self) -> &'static str {
        match (self.passed, self.conflict.is_some()) {
            (true, _) => "PASS",
            (false, true) => "XFAIL",
            (false, false) => "FAIL",
        }
    }
}

/// Grid size: `Small` is a quick smoke run, `Full` is the acceptance grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    Small,
    Full,
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    /// Field sizes to cover; each suite skips sizes outside its own grid.
    pub qs: Vec<u32>,
    pub scale: Scale,
    pub seed: u64,
    pub budget: Budget,
    /// Laurent precision for the expansion suites.
    pub prec: i64,
}

impl SuiteConfig {
    pub fn full() -> Self {
        SuiteConfig {
            qs: vec![2, 3, 4],
            scale: Scale::Full,
            seed: 1,
            budget: Budget::LARGE,
            prec: 60,
        }
    }

    pub(crate) fn covers(&self, q: u32) -> bool {
        self.qs.contains(&q)
    }
}

/// Runs a check body; an error becomes a failed check rather than aborting the suite.
pub(crate) fn check(
    criterion: u8,
    name: impl Into<String>,
    statement: &'static str,
    body: impl FnOnce() -> Result<(bool, String)>,
) -> Check {
    let (passed, detail) = match body() {
        Ok(x) => x,
        Err(e) => (false, format!("error: {e}")),
    };
    Check {
        criterion,
        name: name.into(),
        statement,
        passed,
        detail,
        conflict: None,
    }
}

/// First monic irreducible of degree d, in enumeration order.
pub(crate) fn first_prime(field: &Field, d: usize) -> PolyA {
    PolyA::monic_of_degree(field, d)
        .find(|p| p.is_irreducible())
        .expect("irreducibles exist in every degree")
}

/// Every suite, in criterion order.
pub fn run(cfg: &SuiteConfig) -> Vec<Check> {
    let mut out = goss_checks(cfg);
    out.extend(coset_checks(cfg));
    out.extend(hecke_checks(cfg));
    out.extend(expansion_checks(cfg));
    out.extend(nonexample_checks(cfg));
    out
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(Check::ok)
}

/// The first 200 characters of a detail string.
pub fn brief(detail: &str) -> String {
    match detail.char_indices().nth(200) {
        Some((i, _)) => format!("{} ...", &detail[..i]),
        None => detail.to_string(),
    }
}

pub fn render_table(checks: &[Check]) -> String {
    let width = checks
        .iter()
        .map(|c| c.name.chars().count())
        .max()
        .unwrap_or(0);
    let mut s = String::new();
    for c in checks {
        let pad = width - c.name.chars().count();
        let _ = writeln!(
            s,
            "[{}] {} {}{}  {}",
            c.criterion,
            c.status(),
            c.name,
            " ".repeat(pad),
            c.statement
        );
        if !c.passed && !c.detail.is_empty() {
            let _ = writeln!(s, "       {}", brief(&c.detail));
        }
        if let (false, Some(why)) = (c.passed, c.conflict) {
            let _ = writeln!(s, "       known conflict: {why}");
        }
    }
    let failed = checks.iter().filter(|c| !c.ok()).count();
    let xfail = checks
        .iter()
        .filter(|c| !c.passed && c.conflict.is_some())
        .count();
    let _ = writeln!(
        s,
        "{} checks, {} failed, {} known conflicts",
        checks.len(),
        failed,
        xfail
    );
    s
}

pub fn checks_to_json(checks: &[Check]) -> Value {
    let rows: Vec<Value> = checks
        .iter()
        .map(|c| json!({"criterion": c.criterion, "name": c.name, "statement": c.statement, "passed": c.passed, "status": c.status(), "conflict": c.conflict, "detail": c.detail}))
        .collect();
    json!({"passed": all_passed(checks), "checks": rows})
}
