//! Step budgets for the enumerative operations.
//!
//! Star counting, coverage checks and the exact solver all do work that is
//! exponential in the board size. Each of them takes a [`WorkGuard`] and
//! reports [`Error::GuardExceeded`] instead of running unbounded.

use crate::error::{Error, Result};

/// Default cap on elementary steps for enumerative operations.
pub const DEFAULT_WORK_LIMIT: u64 = 100_000_000;

/// Environment variable that overrides [`DEFAULT_WORK_LIMIT`].
pub const WORK_GUARD_ENV: &str = "MB_WORK_GUARD";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WorkGuard {
    pub limit: u64,
}

impl Default for WorkGuard {
    fn default() -> Self {
        Self {
            limit: DEFAULT_WORK_LIMIT,
        }
    }
}

impl WorkGuard {
    pub fn new(limit: u64) -> Self {
        Self { limit }
    }

    /// Reads `MB_WORK_GUARD`, falling back to the default when unset or
    /// unparsable.
    pub fn from_env() -> Self {
        std::env::var(WORK_GUARD_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(Self::new)
            .unwrap_or_default()
    }

    pub(crate) fn meter(self) -> Meter {
        Meter {
            used: 0,
            limit: self.limit,
        }
    }
}

#[derive(Debug)]
pub(crate) struct Meter {
    used: u64,
    limit: u64,
}

impl Meter {
    #[inline]
    pub(crate) fn tick(&mut self, steps: u64) -> Result<()> {
        self.used = self.used.saturating_add(steps);
        if self.used > self.limit {
            Err(Error::GuardExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }
}
