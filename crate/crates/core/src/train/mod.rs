//! Optimizers, the shared epoch/batch loop and device-call bookkeeping.

mod epochs;
mod ledger;
mod optimizer;

pub use epochs::{train_epochs, EpochObjective, Evaluation, TrainConfig, TrainOutcome};
pub use ledger::{BudgetLedger, LedgerTotals, Phase};
pub use optimizer::{Optimizer, OptimizerConfig};
