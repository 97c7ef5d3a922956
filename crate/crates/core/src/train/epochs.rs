use super::{BudgetLedger, Optimizer, OptimizerConfig, Phase};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::qsim::CallCounter;
use crate::rng::PortableRng;

/// Full-train evaluation: the score plus one residual per sample,
/// reused as the loss derivative for the following epoch's updates.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub score: f64,
    pub residuals: Vec<f64>,
}

/// A gradient-trained model bound to its training data.
pub trait EpochObjective: Sync {
    fn n_samples(&self) -> usize;

    /// Score every sample at `weights`, charging `counter` one call per sample.
    fn evaluate(&self, weights: &[f64], counter: &CallCounter, exec: Exec) -> Result<Evaluation>;

    /// Loss gradient for one sample, given the residual cached in `eval`.
    fn sample_gradient(
        &self,
        weights: &[f64],
        sample: usize,
        eval: &Evaluation,
        counter: &CallCounter,
    ) -> Result<Vec<f64>>;
}

#[derive(Debug, Clone)]
pub struct TrainConfig {
    pub n_epochs: usize,
    pub batch_size: usize,
    pub threshold: f64,
    pub optimizer: OptimizerConfig,
    pub seed: u64,
    pub exec: Exec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutcome {
    pub epochs_run: usize,
    pub final_score: f64,
    /// Score before training followed by the score after each epoch.
    pub score_history: Vec<f64>,
}

/// Mini-batch training with early stopping.
///
/// The full training set is scored once before the first epoch and after
/// every epoch (`N` scoring calls each); training stops as soon as a score
/// reaches `threshold`. Within an epoch the samples are visited in an order
/// shuffled by `PortableRng::derive(seed, epoch)`, batches of `batch_size`
/// with the last partial batch kept. Every sample costs one gradient
/// evaluation; residuals come from the most recent full-train scoring pass,
/// so no extra forward executions are spent.
pub fn train_epochs<O: EpochObjective + ?Sized>(
    objective: &O,
    weights: &mut [f64],
    config: &TrainConfig,
    ledger: &BudgetLedger,
) -> Result<TrainOutcome> {
    let n = objective.n_samples();
    if n == 0 {
        return Err(Error::EmptyData);
    }
    if config.batch_size == 0 {
        return Err(Error::InvalidConfig("batch size must be >= 1".into()));
    }
    let mut optimizer = Optimizer::new(config.optimizer, weights.len())?;
    let scoring = ledger.counter(Phase::Scoring);
    let gradients = ledger.counter(Phase::TrainingGradients);

    let mut eval = objective.evaluate(weights, scoring, config.exec)?;
    let mut history = vec![eval.score];
    let mut epochs_run = 0;
    if eval.score >= config.threshold {
        return Ok(TrainOutcome {
            epochs_run,
            final_score: eval.score,
            score_history: history,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    for epoch in 0..config.n_epochs {
        order.sort_unstable();
        PortableRng::derive(config.seed, epoch as u64).shuffle(&mut order);
        for batch in order.chunks(config.batch_size) {
            let snapshot: &[f64] = weights;
            let per_sample = config
                .exec
                .map(batch, |&i| objective.sample_gradient(snapshot, i, &eval, gradients));
            let mut grad = vec![0.0; weights.len()];
            for g in per_sample {
                for (acc, gi) in grad.iter_mut().zip(g?) {
                    *acc += gi;
                }
            }
            let scale = 1.0 / batch.len() as f64;
            grad.iter_mut().for_each(|g| *g *= scale);
            optimizer.step(weights, &grad)?;
        }
        epochs_run += 1;
        eval = objective.evaluate(weights, scoring, config.exec)?;
        history.push(eval.score);
        if eval.score >= config.threshold {
            break;
        }
    }
    Ok(TrainOutcome {
        epochs_run,
        final_score: eval.score,
        score_history: history,
    })
}
