use super::record::{select_highest_score, TrialRecord, TrialStatus};
use super::study::seed_for_run;
use super::Trial;
use crate::data::Dataset;
use crate::embed::Registry;
use crate::error::{Error, Result};
use crate::exec::{with_pool, Exec};
use crate::models::{init_weights, FitOptions, Model};
use crate::rng::mix_seed;
use crate::store::ModelSpecFile;
use crate::train::{BudgetLedger, LedgerTotals, OptimizerConfig};

const OPTIMIZERS: [&str; 3] = ["vanilla_gd", "momentum_gd", "adam"];
const LEARNING_RATE: (f64, f64) = (1e-3, 0.5);
const MOMENTUM: (f64, f64) = (0.5, 0.95);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TunerConfig {
    pub n_trials: usize,
    pub n_seeds: usize,
    pub n_cores: usize,
    pub base_seed: u64,
    pub exec: Exec,
}

impl Default for TunerConfig {
    fn default() -> Self {
        Self {
            n_trials: 20,
            n_seeds: 3,
            n_cores: 1,
            base_seed: 0,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TunerOutcome {
    pub optimizer: OptimizerConfig,
    pub records: Vec<TrialRecord>,
    /// Index of the winning record.
    pub best: usize,
}

/// Optimizer kind, log-uniform learning rate, and momentum where relevant.
pub fn suggest_optimizer(trial: &mut Trial) -> Result<OptimizerConfig> {
    let kinds: Vec<String> = OPTIMIZERS.iter().map(|s| s.to_string()).collect();
    let kind = trial.suggest_categorical("optimizer", &kinds)?;
    let learning_rate = trial.suggest_float("learning_rate", LEARNING_RATE.0, LEARNING_RATE.1, true)?;
    Ok(match kind.as_str() {
        "vanilla_gd" => OptimizerConfig::VanillaGd { learning_rate },
        "momentum_gd" => OptimizerConfig::MomentumGd {
            learning_rate,
            momentum: trial.suggest_float("momentum", MOMENTUM.0, MOMENTUM.1, false)?,
        },
        _ => OptimizerConfig::adam(learning_rate),
    })
}

fn reinitialized(model: &Model, seed: u64) -> Model {
    let mut model = model.clone();
    match &mut model {
        Model::QnnClassifier(m) => m.weights = init_weights(m.weights.len(), seed),
        Model::QnnRegressor(m) => {
            m.weights = init_weights(m.weights.len(), seed);
            m.target_range = None;
        }
        Model::QekClassifier(_) | Model::RbmClusterer(_) => {}
    }
    model
}

fn tuner_trial(trial_id: u64, base: &Model, data: &Dataset, config: &TunerConfig) -> TrialRecord {
    let seed = mix_seed(config.base_seed, trial_id);
    let mut trial = Trial::new(trial_id, seed);
    let mut scores = Vec::new();
    let mut spent = LedgerTotals::default();
    let mut run = || -> Result<()> {
        let optimizer = suggest_optimizer(&mut trial)?;
        for i in 0..config.n_seeds {
            let run_seed = seed_for_run(config.base_seed, i as u64);
            let mut model = reinitialized(base, run_seed);
            let ledger = BudgetLedger::new();
            let opts = FitOptions {
                optimizer,
                seed: run_seed,
                exec: config.exec,
            };
            let score = model.fit(data, &opts, &ledger);
            spent += ledger.totals();
            let score = score?.ok_or(Error::UnsupportedModel("model without a training score".into()))?;
            if !score.is_finite() {
                return Err(Error::NonFinite("score"));
            }
            scores.push(score);
        }
        Ok(())
    };
    let error = run().err().map(|e| e.to_string());
    let mean_score = error
        .is_none()
        .then(|| scores.iter().sum::<f64>() / scores.len() as f64);
    TrialRecord {
        trial_id,
        seed,
        sampled: trial.into_sampled(),
        per_seed_scores: scores,
        mean_score,
        total_calls: spent.total(),
        ledger: spent,
        threshold: 0.0,
        feasible: mean_score.is_some(),
        status: if error.is_none() {
            TrialStatus::Complete
        } else {
            TrialStatus::Failed
        },
        error,
    }
}

/// Compare optimizers on the fixed architecture of a saved gradient-trained
/// model. Each run starts from fresh weights; epochs and threshold come
/// from the file. The winner maximizes mean final score, then fewer calls.
pub fn find_hyperparameters(
    spec: &ModelSpecFile,
    registry: &Registry,
    data: &Dataset,
    config: &TunerConfig,
) -> Result<TunerOutcome> {
    if !spec.model_kind.is_gradient_trained() {
        return Err(Error::UnsupportedModel(format!(
            "{} has no optimizer to tune",
            spec.model_family
        )));
    }
    if config.n_trials == 0 || config.n_seeds == 0 || config.n_cores == 0 {
        return Err(Error::InvalidConfig(
            "n_trials, n_seeds and n_cores must be at least 1".into(),
        ));
    }
    let base = spec.to_model(registry)?;
    let records = with_pool(config.n_cores, || {
        config
            .exec
            .map_range(config.n_trials, |t| tuner_trial(t as u64, &base, data, config))
    });
    let best = select_highest_score(&records).ok_or(Error::StudyFailed)?;
    let winner = &records[best];
    let mut trial = Trial::replay(winner.trial_id, winner.seed, winner.sampled.clone());
    let optimizer = suggest_optimizer(&mut trial)?;
    Ok(TunerOutcome {
        optimizer,
        records,
        best,
    })
}
