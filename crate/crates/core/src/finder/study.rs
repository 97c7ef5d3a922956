use std::panic::{catch_unwind, AssertUnwindSafe};

use super::record::{select_best, Selection, TrialRecord, TrialStatus};
use super::suggest::{suggest_supervised_kwargs, suggest_unsupervised_kwargs, ModelOptions};
use super::Trial;
use crate::data::Dataset;
use crate::embed::{Registry, Task};
use crate::error::{Error, Result};
use crate::exec::{with_pool, Exec};
use crate::models::{FitOptions, Model};
use crate::rng::mix_seed;
use crate::store::{Metadata, ModelSpecFile, StudyStore};
use crate::train::{BudgetLedger, LedgerTotals, OptimizerConfig, Phase};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FinderConfig {
    pub task: Task,
    pub n_trials: usize,
    pub n_seeds: usize,
    pub n_epochs: usize,
    /// Concurrent trials.
    pub n_cores: usize,
    pub threshold: f64,
    pub base_seed: u64,
    pub optimizer: OptimizerConfig,
    pub exec: Exec,
}

impl FinderConfig {
    pub fn new(task: Task) -> Self {
        Self {
            task,
            n_trials: 20,
            n_seeds: 3,
            n_epochs: 10,
            n_cores: 1,
            threshold: 0.8,
            base_seed: 0,
            optimizer: OptimizerConfig::default(),
            exec: Exec::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("n_trials", self.n_trials),
            ("n_seeds", self.n_seeds),
            ("n_cores", self.n_cores),
        ] {
            if v == 0 {
                return Err(Error::InvalidConfig(format!("{name} must be at least 1")));
            }
        }
        if !self.threshold.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "threshold {} is not finite",
                self.threshold
            )));
        }
        self.optimizer.validate()
    }

    /// Seed driving the sampler of trial `trial_id`.
    pub fn trial_seed(&self, trial_id: u64) -> u64 {
        mix_seed(self.base_seed, trial_id)
    }
}

/// Seed of the `i`-th training run within a trial.
pub fn seed_for_run(base_seed: u64, i: u64) -> u64 {
    base_seed.wrapping_mul(10007).wrapping_add(i)
}

/// Sample the model family, then its construction options.
pub fn options_for_trial(
    trial: &mut Trial,
    config: &FinderConfig,
    registry: &Registry,
    data: &Dataset,
) -> Result<ModelOptions> {
    let families = registry.models_for(config.task);
    if families.is_empty() {
        return Err(Error::EmptyRegistry("model"));
    }
    let names: Vec<String> = families.iter().map(|f| f.name.clone()).collect();
    let name = trial.suggest_categorical("model", &names)?;
    let family = registry.model(&name)?;
    if config.task.is_supervised() {
        suggest_supervised_kwargs(trial, family, registry, data, config.n_epochs, config.threshold)
    } else {
        suggest_unsupervised_kwargs(trial, family, data, config.n_epochs)
    }
}

fn fit_options(config: &FinderConfig, seed: u64) -> FitOptions {
    FitOptions {
        optimizer: config.optimizer,
        seed,
        exec: config.exec,
    }
}

/// Construct, fit and score one model; all device calls land in `ledger`.
fn fit_and_score(options: &ModelOptions, data: &Dataset, opts: &FitOptions, ledger: &BudgetLedger) -> Result<f64> {
    let mut model = options.build(opts.seed)?;
    match model.fit(data, opts, ledger)? {
        Some(score) => Ok(score),
        None => Ok(model.score(data, ledger.counter(Phase::Scoring), opts.exec)?.value),
    }
}

fn evaluate(
    trial: &mut Trial,
    config: &FinderConfig,
    registry: &Registry,
    data: &Dataset,
    scores: &mut Vec<f64>,
    spent: &mut LedgerTotals,
) -> Result<()> {
    let options = options_for_trial(trial, config, registry, data)?;
    for i in 0..config.n_seeds {
        let ledger = BudgetLedger::new();
        let result = fit_and_score(
            &options,
            data,
            &fit_options(config, seed_for_run(config.base_seed, i as u64)),
            &ledger,
        );
        *spent += ledger.totals();
        let score = result?;
        if !score.is_finite() {
            return Err(Error::NonFinite("score"));
        }
        scores.push(score);
    }
    Ok(())
}

fn panic_message(payload: &(dyn std::any::Any + Send)) -> String {
    payload
        .downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| payload.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic".into())
}

/// Run `f`, turning an error or a panic into its message.
fn contain(f: impl FnOnce() -> Result<()>) -> Option<String> {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => None,
        Ok(Err(e)) => Some(e.to_string()),
        Err(payload) => Some(Error::TrialPanicked(panic_message(payload.as_ref())).to_string()),
    }
}

/// Run one trial. Errors and panics inside the trial produce a failed
/// record; only a store write failure is returned as `Err`.
pub fn run_trial(
    trial_id: u64,
    config: &FinderConfig,
    registry: &Registry,
    data: &Dataset,
    store: Option<&StudyStore>,
) -> Result<TrialRecord> {
    let seed = config.trial_seed(trial_id);
    let mut trial = Trial::new(trial_id, seed);
    let mut scores = Vec::with_capacity(config.n_seeds);
    let mut spent = LedgerTotals::default();
    let error = contain(|| evaluate(&mut trial, config, registry, data, &mut scores, &mut spent));
    let mean_score = error
        .is_none()
        .then(|| scores.iter().sum::<f64>() / scores.len() as f64);
    let record = TrialRecord {
        trial_id,
        seed,
        sampled: trial.into_sampled(),
        per_seed_scores: scores,
        mean_score,
        total_calls: spent.total(),
        ledger: spent,
        threshold: config.threshold,
        feasible: mean_score.is_some_and(|m| m >= config.threshold),
        status: if error.is_none() {
            TrialStatus::Complete
        } else {
            TrialStatus::Failed
        },
        error,
    };
    if let Some(store) = store {
        store.append(&record)?;
    }
    Ok(record)
}

#[derive(Debug, Clone)]
pub struct FindOutcome {
    pub model: Model,
    pub spec: ModelSpecFile,
    pub options: ModelOptions,
    /// Ordered by trial id.
    pub records: Vec<TrialRecord>,
    pub selection: Selection,
    /// Device calls spent retraining the winner.
    pub retrain_calls: LedgerTotals,
}

/// Run the study and retrain the selected configuration on `base_seed`.
pub fn find_model(
    config: &FinderConfig,
    registry: &Registry,
    data: &Dataset,
    store: Option<&StudyStore>,
) -> Result<FindOutcome> {
    config.validate()?;
    if config.task.is_supervised() {
        data.targets()?;
    }
    let results = with_pool(config.n_cores, || {
        config
            .exec
            .map_range(config.n_trials, |t| run_trial(t as u64, config, registry, data, store))
    });
    let records = results.into_iter().collect::<Result<Vec<_>>>()?;
    let selection = select_best(&records).ok_or(Error::StudyFailed)?;
    let best = &records[selection.index];

    let mut trial = Trial::replay(best.trial_id, best.seed, best.sampled.clone());
    let options = options_for_trial(&mut trial, config, registry, data)?;
    let mut model = options.build(config.base_seed)?;
    let ledger = BudgetLedger::new();
    model.fit(data, &fit_options(config, config.base_seed), &ledger)?;
    let spec = ModelSpecFile::from_model(
        &model,
        options.family(),
        data.feature_names.clone(),
        model.kind().is_gradient_trained().then_some(config.optimizer),
        Metadata {
            mean_score: best.mean_score,
            total_calls: best.total_calls,
            base_seed: config.base_seed,
            feasible: selection.feasible,
            trial_id: Some(best.trial_id),
        },
    );
    Ok(FindOutcome {
        model,
        spec,
        options,
        records,
        selection,
        retrain_calls: ledger.totals(),
    })
}
