use std::cmp::Ordering;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::ParamValue;
use crate::train::LedgerTotals;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrialStatus {
    Complete,
    Failed,
}

/// Outcome of one trial, as stored one-per-line in the study store.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_id: u64,
    pub seed: u64,
    pub sampled: IndexMap<String, ParamValue>,
    pub per_seed_scores: Vec<f64>,
    /// `None` for failed trials.
    pub mean_score: Option<f64>,
    pub total_calls: u64,
    pub ledger: LedgerTotals,
    pub threshold: f64,
    pub feasible: bool,
    pub status: TrialStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl TrialRecord {
    pub fn is_complete(&self) -> bool {
        self.status == TrialStatus::Complete
    }

    /// Selection cost: device calls, with failed trials at infinity.
    pub fn cost(&self) -> Option<u64> {
        self.is_complete().then_some(self.total_calls)
    }
}

/// Winner of a set of records under the call-minimization objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Selection {
    pub trial_id: u64,
    pub index: usize,
    /// False when no trial met the threshold and the best-scoring complete
    /// trial was returned instead.
    pub feasible: bool,
}

/// Among feasible complete trials: fewest calls, then higher mean score,
/// then lower trial id. Without any feasible trial: highest mean score,
/// then fewer calls, then lower trial id.
pub fn select_best(records: &[TrialRecord]) -> Option<Selection> {
    let complete = || records.iter().enumerate().filter(|(_, r)| r.is_complete());
    let score = |r: &TrialRecord| r.mean_score.unwrap_or(f64::NEG_INFINITY);
    let feasible = complete().filter(|(_, r)| r.feasible).min_by(|(_, a), (_, b)| {
        a.total_calls
            .cmp(&b.total_calls)
            .then_with(|| score(b).total_cmp(&score(a)))
            .then_with(|| a.trial_id.cmp(&b.trial_id))
    });
    if let Some((index, r)) = feasible {
        return Some(Selection {
            trial_id: r.trial_id,
            index,
            feasible: true,
        });
    }
    complete()
        .min_by(|(_, a), (_, b)| {
            score(b)
                .total_cmp(&score(a))
                .then_with(|| a.total_calls.cmp(&b.total_calls))
                .then_with(|| a.trial_id.cmp(&b.trial_id))
        })
        .map(|(index, r)| Selection {
            trial_id: r.trial_id,
            index,
            feasible: false,
        })
}

/// Tuner ordering: highest mean score, then fewer calls, then lower id.
pub fn select_highest_score(records: &[TrialRecord]) -> Option<usize> {
    records
        .iter()
        .enumerate()
        .filter(|(_, r)| r.is_complete())
        .min_by(|(_, a), (_, b)| {
            let sa = a.mean_score.unwrap_or(f64::NEG_INFINITY);
            let sb = b.mean_score.unwrap_or(f64::NEG_INFINITY);
            match sb.total_cmp(&sa) {
                Ordering::Equal => a
                    .total_calls
                    .cmp(&b.total_calls)
                    .then_with(|| a.trial_id.cmp(&b.trial_id)),
                o => o,
            }
        })
        .map(|(i, _)| i)
}
