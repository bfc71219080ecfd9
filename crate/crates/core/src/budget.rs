//! Work accounting for the exhaustive searches and enumerations.
//!
//! Every potentially explosive operation charges one unit per expansion step
//! against a [`Budget`] and stops with [`BudgetExceeded`] instead of running
//! away. Callers read back [`Budget::spent`] as the cost of the operation.

use thiserror::Error;

/// Default cap on expansion steps for enumeration and search.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("budget exceeded: more than {limit} expansion steps required")]
pub struct BudgetExceeded {
    pub limit: u64,
}

/// A mutable counter with a hard limit on expansion steps.
#[derive(Debug, Clone)]
pub struct Budget {
    limit: u64,
    spent: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, spent: 0 }
    }

    pub fn charge(&mut self) -> Result<(), BudgetExceeded> {
        if self.spent >= self.limit {
            return Err(BudgetExceeded { limit: self.limit });
        }
        self.spent += 1;
        Ok(())
    }

    pub fn spent(&self) -> u64 {
        self.spent
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}
