use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use crate::qsim::CallCounter;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    TrainingGradients,
    TrainingForward,
    Scoring,
    Kernel,
}

/// Device calls attributed to training phases. Each phase owns an atomic
/// counter, so one ledger can be shared by parallel workers.
#[derive(Debug, Default)]
pub struct BudgetLedger {
    training_gradients: CallCounter,
    training_forward: CallCounter,
    scoring: CallCounter,
    kernel: CallCounter,
}

impl BudgetLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn counter(&self, phase: Phase) -> &CallCounter {
        match phase {
            Phase::TrainingGradients => &self.training_gradients,
            Phase::TrainingForward => &self.training_forward,
            Phase::Scoring => &self.scoring,
            Phase::Kernel => &self.kernel,
        }
    }

    pub fn totals(&self) -> LedgerTotals {
        LedgerTotals {
            training_gradients: self.training_gradients.total(),
            training_forward: self.training_forward.total(),
            scoring: self.scoring.total(),
            kernel: self.kernel.total(),
        }
    }

    pub fn total(&self) -> u64 {
        self.totals().total()
    }
}

/// Snapshot of a ledger; sums across seeds and trials.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerTotals {
    pub training_gradients: u64,
    pub training_forward: u64,
    pub scoring: u64,
    pub kernel: u64,
}

impl LedgerTotals {
    pub fn total(&self) -> u64 {
        self.training_gradients + self.training_forward + self.scoring + self.kernel
    }
}

impl Add for LedgerTotals {
    type Output = LedgerTotals;

    fn add(self, rhs: Self) -> Self {
        LedgerTotals {
            training_gradients: self.training_gradients + rhs.training_gradients,
            training_forward: self.training_forward + rhs.training_forward,
            scoring: self.scoring + rhs.scoring,
            kernel: self.kernel + rhs.kernel,
        }
    }
}

impl AddAssign for LedgerTotals {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl std::iter::Sum for LedgerTotals {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(LedgerTotals::default(), Add::add)
    }
}
