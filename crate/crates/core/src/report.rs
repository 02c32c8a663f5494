//! Pass/fail records shared by the verification operations.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Pass,
    Fail,
    /// Not evaluated (hypothesis not met or beyond the exact-enumeration
    /// envelope). Never counted as a pass or a failure.
    Skipped,
}

/// One checked statement: `actual` compared against `bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub statement: String,
    pub bound_value: Option<BigInt>,
    pub actual_value: Option<BigInt>,
    pub status: Status,
}

impl Check {
    pub fn eq(statement: impl Into<String>, expected: BigInt, actual: BigInt) -> Self {
        let status = if expected == actual { Status::Pass } else { Status::Fail };
        Self::with(statement, expected, actual, status)
    }

    /// Passes when `actual <= bound`.
    pub fn at_most(statement: impl Into<String>, bound: BigInt, actual: BigInt) -> Self {
        let status = if actual <= bound { Status::Pass } else { Status::Fail };
        Self::with(statement, bound, actual, status)
    }

    /// Passes when `actual >= bound`.
    pub fn at_least(statement: impl Into<String>, bound: BigInt, actual: BigInt) -> Self {
        let status = if actual >= bound { Status::Pass } else { Status::Fail };
        Self::with(statement, bound, actual, status)
    }

    /// Passes when `actual > bound`.
    pub fn greater(statement: impl Into<String>, bound: BigInt, actual: BigInt) -> Self {
        let status = if actual > bound { Status::Pass } else { Status::Fail };
        Self::with(statement, bound, actual, status)
    }

    pub fn skipped(statement: impl Into<String>) -> Self {
        Check {
            statement: statement.into(),
            bound_value: None,
            actual_value: None,
            status: Status::Skipped,
        }
    }

    fn with(statement: impl Into<String>, bound: BigInt, actual: BigInt, status: Status) -> Self {
        Check {
            statement: statement.into(),
            bound_value: Some(bound),
            actual_value: Some(actual),
            status,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    /// No check failed (skipped checks are allowed).
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}
