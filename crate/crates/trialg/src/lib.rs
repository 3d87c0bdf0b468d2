//! Exact computations with composition algebras, triality and the Type III
//! gradings on the trialitarian algebras of type D4.
//!
//! Everything is done over a cyclotomic field Q(ζ_N) (N = 12 by default), so
//! every identity is checked as an exact zero.

pub mod albert;
pub mod brauer;
pub mod classify;
pub mod composition;
pub mod cyclic;
pub mod fgab;
pub mod grading;
pub mod linalg;
pub mod scalars;
pub mod trialitarian;
pub mod triality;

pub use scalars::{make_field, Cyc, Field, ScalarError};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Outcome of a verifier: every failed check is listed.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct Report {
    pub checks: usize,
    pub violations: Vec<String>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn check(&mut self, cond: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !cond {
            self.violations.push(what());
        }
    }

    pub fn merge(&mut self, label: &str, other: Report) {
        self.checks += other.checks;
        for v in other.violations {
            self.violations.push(format!("{label}: {v}"));
        }
    }
}
