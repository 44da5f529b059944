use thiserror::Error;

/// Node limit for the exhaustive searches used by the equivalence tests.
pub const DEFAULT_BUDGET: u64 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("search budget of {0} nodes exceeded")]
pub struct BudgetExceeded(pub u64);

#[derive(Debug)]
pub(crate) struct Meter {
    limit: u64,
    used: u64,
}

impl Meter {
    pub(crate) fn new(limit: u64) -> Self {
        Meter { limit, used: 0 }
    }

    pub(crate) fn tick(&mut self) -> Result<(), BudgetExceeded> {
        self.used += 1;
        if self.used > self.limit {
            Err(BudgetExceeded(self.limit))
        } else {
            Ok(())
        }
    }
}
