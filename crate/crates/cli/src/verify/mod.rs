//! The acceptance suite: eleven criteria, each a deterministic randomized or
//! curated experiment checked against an independent oracle.
//!
//! Every criterion draws from its own seeded generator, so runs are
//! reproducible. A criterion fails when any check fails, when it panics, or
//! when it overruns its time budget.

mod gen;
mod kempf;
mod lattice;
mod logs;
mod quadratic;

use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use serde::Serialize;

/// Pinned tolerances.
pub mod tol {
    /// Relative error of the certified derivatives against central differences.
    pub const DERIVATIVE_REL: f64 = 1e-6;
    /// `|x2|` at the minimizer of the flat family.
    pub const FLAT_SECOND_COORD: f64 = 1e-12;
    /// Largest working precision the certified comparisons may escalate to.
    pub const MAX_BITS: u64 = 1 << 14;
}

type Check = fn() -> Result<String, String>;

struct Criterion {
    id: u8,
    name: &'static str,
    budget_seconds: Option<f64>,
    check: Check,
}

const CRITERIA: [Criterion; 11] = [
    Criterion { id: 1, name: "lattice lifting exactness", budget_seconds: Some(60.0), check: lattice::lifting },
    Criterion { id: 2, name: "CVP to SLDP distance preservation", budget_seconds: Some(120.0), check: lattice::cvp_reduction },
    Criterion { id: 3, name: "SLDP sandwich", budget_seconds: Some(120.0), check: lattice::sldp_sandwich },
    Criterion { id: 4, name: "linear-forms sandwich", budget_seconds: None, check: logs::linear_forms },
    Criterion { id: 5, name: "metric equivalence on the unit torus", budget_seconds: None, check: logs::metric_equivalence },
    Criterion { id: 6, name: "orbit equality consistency", budget_seconds: None, check: logs::orbit_equality },
    Criterion { id: 7, name: "flat Kempf-Ness family", budget_seconds: Some(60.0), check: kempf::flat_family },
    Criterion { id: 8, name: "Kempf-Ness derivatives", budget_seconds: None, check: kempf::derivatives },
    Criterion { id: 9, name: "sums of squares", budget_seconds: Some(60.0), check: quadratic::sums_of_squares },
    Criterion { id: 10, name: "Waring decomposition", budget_seconds: None, check: quadratic::waring },
    Criterion { id: 11, name: "reduction round trips", budget_seconds: None, check: lattice::round_trips },
];

/// Outcome of one criterion.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget_seconds: Option<f64>,
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {:>2} {}: {} ({:.2} s", self.id, self.name, self.detail, self.seconds)?;
        if let Some(b) = self.budget_seconds {
            write!(f, ", budget {b:.0} s")?;
        }
        write!(f, ")")
    }
}

pub fn ids() -> Vec<u8> {
    CRITERIA.iter().map(|c| c.id).collect()
}

fn run_criterion(c: &Criterion) -> Report {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(c.check)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "unknown panic".into());
        Err(format!("panicked: {msg}"))
    });
    let seconds = start.elapsed().as_secs_f64();
    let (mut passed, mut detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if let Some(b) = c.budget_seconds {
        if seconds > b {
            passed = false;
            detail = format!("{detail}; exceeded the time budget");
        }
    }
    Report {
        id: c.id,
        name: c.name,
        passed,
        detail,
        seconds,
        budget_seconds: c.budget_seconds,
    }
}

/// Runs one criterion by id.
pub fn run_one(id: u8) -> Option<Report> {
    CRITERIA.iter().find(|c| c.id == id).map(run_criterion)
}

/// Runs the listed criteria, or all of them when `only` is empty.
pub fn run_selected(only: &[u8]) -> Vec<Report> {
    CRITERIA
        .iter()
        .filter(|c| only.is_empty() || only.contains(&c.id))
        .map(run_criterion)
        .collect()
}

/// `Err(msg)` unless `cond` holds.
fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn core_err(e: robust_orbits::Error) -> String {
    e.to_string()
}
