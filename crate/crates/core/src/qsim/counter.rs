use std::sync::atomic::{AtomicU64, Ordering};

/// Monotone count of simulated device calls. One circuit execution is one
/// call; increments are atomic so parallel trials may share a counter.
#[derive(Debug, Default)]
pub struct CallCounter(AtomicU64);

impl CallCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&self, calls: u64) {
        self.0.fetch_add(calls, Ordering::Relaxed);
    }

    pub fn total(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }
}
