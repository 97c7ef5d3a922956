use std::f64::consts::PI;

use super::metrics::{accuracy, r2};
use super::{validate_binary_labels, FitOptions};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::qsim::{expectation_value, parameter_shift_gradient, CallCounter, CircuitSpec};
use crate::rng::PortableRng;
use crate::train::{train_epochs, BudgetLedger, EpochObjective, Evaluation, TrainConfig, TrainOutcome};

const MEASURED_WIRE: usize = 0;
const WEIGHT_STREAM: u64 = 0x5745_4947;

/// Initial weights, uniform in `[-π, π)`.
pub fn init_weights(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = PortableRng::derive(seed, WEIGHT_STREAM);
    (0..n).map(|_| rng.uniform(-PI, PI)).collect()
}

/// Class-1 probability from `⟨Z_0⟩`: `p = (1 − ⟨Z⟩)/2`, so class 0 sits at `|0⟩`.
pub fn class_probability(expectation: f64) -> f64 {
    ((1.0 - expectation) / 2.0).clamp(0.0, 1.0)
}

fn label_of(expectation: f64) -> f64 {
    if class_probability(expectation) >= 0.5 {
        1.0
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy)]
enum Scoring {
    Accuracy,
    R2,
}

/// MSE between `⟨Z_0⟩` and targets in `[-1, 1]`.
struct QnnObjective<'a> {
    circuit: &'a CircuitSpec,
    features: &'a [Vec<f64>],
    targets: Vec<f64>,
    scoring: Scoring,
}

impl EpochObjective for QnnObjective<'_> {
    fn n_samples(&self) -> usize {
        self.features.len()
    }

    fn evaluate(&self, weights: &[f64], counter: &CallCounter, exec: Exec) -> Result<Evaluation> {
        let outputs = exec
            .map(self.features, |x| {
                expectation_value(self.circuit, weights, x, MEASURED_WIRE, counter)
            })
            .into_iter()
            .collect::<Result<Vec<f64>>>()?;
        let residuals = outputs.iter().zip(&self.targets).map(|(f, t)| f - t).collect();
        let score = match self.scoring {
            Scoring::Accuracy => {
                let predicted: Vec<f64> = outputs.iter().map(|&f| label_of(f)).collect();
                let truth: Vec<f64> = self.targets.iter().map(|&t| label_of(t)).collect();
                accuracy(&predicted, &truth)?
            }
            Scoring::R2 => r2(&outputs, &self.targets)?,
        };
        Ok(Evaluation { score, residuals })
    }

    fn sample_gradient(
        &self,
        weights: &[f64],
        sample: usize,
        eval: &Evaluation,
        counter: &CallCounter,
    ) -> Result<Vec<f64>> {
        let scale = 2.0 * eval.residuals[sample];
        let mut g = parameter_shift_gradient(self.circuit, weights, &self.features[sample], MEASURED_WIRE, counter)?;
        g.iter_mut().for_each(|v| *v *= scale);
        Ok(g)
    }
}

fn check_weights(circuit: &CircuitSpec, weights: &[f64]) -> Result<()> {
    if weights.len() != circuit.param_count() {
        return Err(Error::WeightLength {
            expected: circuit.param_count(),
            got: weights.len(),
        });
    }
    Ok(())
}

/// Binary classifier reading `⟨Z_0⟩` of a variational circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct QnnClassifier {
    pub circuit: CircuitSpec,
    pub weights: Vec<f64>,
    pub batch_size: usize,
    pub accuracy_threshold: f64,
    pub n_epochs: usize,
}

impl QnnClassifier {
    pub fn new(circuit: CircuitSpec, batch_size: usize, accuracy_threshold: f64, n_epochs: usize, seed: u64) -> Self {
        let weights = init_weights(circuit.param_count(), seed);
        Self {
            circuit,
            weights,
            batch_size,
            accuracy_threshold,
            n_epochs,
        }
    }

    /// `(label, p(class 1))` for one sample; one device call.
    pub fn predict_one(&self, x: &[f64], counter: &CallCounter) -> Result<(f64, f64)> {
        check_weights(&self.circuit, &self.weights)?;
        let z = expectation_value(&self.circuit, &self.weights, x, MEASURED_WIRE, counter)?;
        Ok((label_of(z), class_probability(z)))
    }

    pub fn predict(&self, features: &[Vec<f64>], counter: &CallCounter, exec: Exec) -> Result<Vec<f64>> {
        exec.map(features, |x| self.predict_one(x, counter).map(|(l, _)| l))
            .into_iter()
            .collect()
    }

    pub fn score(&self, data: &Dataset, counter: &CallCounter, exec: Exec) -> Result<f64> {
        let predicted = self.predict(&data.features, counter, exec)?;
        accuracy(&predicted, data.targets()?)
    }

    /// Mini-batch gradient descent on MSE between `⟨Z_0⟩` and `1 − 2y`.
    pub fn fit(&mut self, data: &Dataset, opts: &FitOptions, ledger: &BudgetLedger) -> Result<TrainOutcome> {
        check_weights(&self.circuit, &self.weights)?;
        let labels = data.targets()?;
        validate_binary_labels(labels)?;
        let objective = QnnObjective {
            circuit: &self.circuit,
            features: &data.features,
            targets: labels.iter().map(|y| 1.0 - 2.0 * y).collect(),
            scoring: Scoring::Accuracy,
        };
        let config = TrainConfig {
            n_epochs: self.n_epochs,
            batch_size: self.batch_size,
            threshold: self.accuracy_threshold,
            optimizer: opts.optimizer,
            seed: opts.seed,
            exec: opts.exec,
        };
        train_epochs(&objective, &mut self.weights, &config, ledger)
    }
}

/// Regressor: targets are mapped affinely onto `[-1, 1]` for training and
/// predictions are mapped back.
#[derive(Debug, Clone, PartialEq)]
pub struct QnnRegressor {
    pub circuit: CircuitSpec,
    pub weights: Vec<f64>,
    pub batch_size: usize,
    /// Early-stopping threshold on training R².
    pub score_threshold: f64,
    pub n_epochs: usize,
    /// `(min, max)` of the training targets, set by `fit`.
    pub target_range: Option<(f64, f64)>,
}

impl QnnRegressor {
    pub fn new(circuit: CircuitSpec, batch_size: usize, score_threshold: f64, n_epochs: usize, seed: u64) -> Self {
        let weights = init_weights(circuit.param_count(), seed);
        Self {
            circuit,
            weights,
            batch_size,
            score_threshold,
            n_epochs,
            target_range: None,
        }
    }

    pub fn rescale(range: (f64, f64), y: f64) -> f64 {
        2.0 * (y - range.0) / (range.1 - range.0) - 1.0
    }

    pub fn unscale(range: (f64, f64), z: f64) -> f64 {
        range.0 + (z + 1.0) * (range.1 - range.0) / 2.0
    }

    pub fn predict_one(&self, x: &[f64], counter: &CallCounter) -> Result<f64> {
        let range = self.target_range.ok_or(Error::NotTrained)?;
        check_weights(&self.circuit, &self.weights)?;
        let z = expectation_value(&self.circuit, &self.weights, x, MEASURED_WIRE, counter)?;
        Ok(Self::unscale(range, z))
    }

    pub fn predict(&self, features: &[Vec<f64>], counter: &CallCounter, exec: Exec) -> Result<Vec<f64>> {
        exec.map(features, |x| self.predict_one(x, counter))
            .into_iter()
            .collect()
    }

    pub fn score(&self, data: &Dataset, counter: &CallCounter, exec: Exec) -> Result<f64> {
        let predicted = self.predict(&data.features, counter, exec)?;
        r2(&predicted, data.targets()?)
    }

    pub fn fit(&mut self, data: &Dataset, opts: &FitOptions, ledger: &BudgetLedger) -> Result<TrainOutcome> {
        check_weights(&self.circuit, &self.weights)?;
        let y = data.targets()?;
        let lo = y.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !(hi > lo) {
            return Err(Error::ConstantTargets);
        }
        let range = (lo, hi);
        let objective = QnnObjective {
            circuit: &self.circuit,
            features: &data.features,
            targets: y.iter().map(|&v| Self::rescale(range, v)).collect(),
            scoring: Scoring::R2,
        };
        let config = TrainConfig {
            n_epochs: self.n_epochs,
            batch_size: self.batch_size,
            threshold: self.score_threshold,
            optimizer: opts.optimizer,
            seed: opts.seed,
            exec: opts.exec,
        };
        let outcome = train_epochs(&objective, &mut self.weights, &config, ledger)?;
        self.target_range = Some(range);
        Ok(outcome)
    }

    /// Training-set MSE in the rescaled target space, without touching any
    /// ledger. Diagnostic only.
    pub fn training_mse(&self, data: &Dataset) -> Result<f64> {
        let range = self.target_range.ok_or(Error::NotTrained)?;
        let y = data.targets()?;
        let mut sum = 0.0;
        for (x, &t) in data.features.iter().zip(y) {
            let f = self.circuit.execute(&self.weights, x)?.expectation_z(MEASURED_WIRE)?;
            sum += (f - Self::rescale(range, t)).powi(2);
        }
        Ok(sum / y.len() as f64)
    }
}
