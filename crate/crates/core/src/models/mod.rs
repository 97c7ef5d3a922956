//! The trainable model families and their scoring.

mod kernel;
mod metrics;
mod qek;
mod qnn;
mod rbm;

pub use kernel::{kernel_matrix, training_kernel, FeatureMap};
pub use metrics::{accuracy, r2, silhouette, Score, ScoreKind};
pub use qek::{ridge_solve, QekClassifier, DEFAULT_RIDGE};
pub use qnn::{class_probability, init_weights, QnnClassifier, QnnRegressor};
pub use rbm::{BinaryEncoder, DenseLayer, Rbm, RbmClusterer, RbmFitReport};

use crate::data::Dataset;
use crate::embed::ModelKind;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::qsim::CallCounter;
use crate::train::{BudgetLedger, OptimizerConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub optimizer: OptimizerConfig,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            optimizer: OptimizerConfig::default(),
            seed: 0,
            exec: Exec::default(),
        }
    }
}

/// At least two labels, all in {0, 1}, with both classes present.
pub fn validate_binary_labels(labels: &[f64]) -> Result<()> {
    if labels.len() < 2 {
        return Err(Error::EmptyData);
    }
    if let Some(&bad) = labels.iter().find(|&&y| y != 0.0 && y != 1.0) {
        return Err(Error::NonBinaryLabel(bad));
    }
    if labels.iter().all(|&y| y == labels[0]) {
        return Err(Error::SingleClass);
    }
    Ok(())
}

/// Any trained (or trainable) model the finder can produce.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    QnnClassifier(QnnClassifier),
    QnnRegressor(QnnRegressor),
    QekClassifier(QekClassifier),
    RbmClusterer(RbmClusterer),
}

impl Model {
    pub fn kind(&self) -> ModelKind {
        match self {
            Model::QnnClassifier(_) => ModelKind::QnnClassifier,
            Model::QnnRegressor(_) => ModelKind::QnnRegressor,
            Model::QekClassifier(_) => ModelKind::QekClassifier,
            Model::RbmClusterer(_) => ModelKind::RbmClusterer,
        }
    }

    pub fn score_kind(&self) -> ScoreKind {
        match self {
            Model::QnnClassifier(_) | Model::QekClassifier(_) => ScoreKind::MeanAccuracy,
            Model::QnnRegressor(_) => ScoreKind::R2,
            Model::RbmClusterer(_) => ScoreKind::Silhouette,
        }
    }

    pub fn n_features(&self) -> Option<usize> {
        match self {
            Model::RbmClusterer(m) => Some(m.encoder.input_size()),
            _ => None,
        }
    }

    /// Train on `data`. Returns the training-set score when fitting already
    /// produced it as a by-product (the final scoring pass of the epoch loop,
    /// or `Kα` for the kernel model), so callers need not pay for it again.
    pub fn fit(&mut self, data: &Dataset, opts: &FitOptions, ledger: &BudgetLedger) -> Result<Option<f64>> {
        match self {
            Model::QnnClassifier(m) => m.fit(data, opts, ledger).map(|o| Some(o.final_score)),
            Model::QnnRegressor(m) => m.fit(data, opts, ledger).map(|o| Some(o.final_score)),
            Model::QekClassifier(m) => m.fit(data, ledger, opts.exec).map(Some),
            Model::RbmClusterer(m) => m.fit(data, opts.seed).map(|_| None),
        }
    }

    /// Labels, regression values, or cluster ids (as `f64`).
    pub fn predict(&self, features: &[Vec<f64>], counter: &CallCounter, exec: Exec) -> Result<Vec<f64>> {
        match self {
            Model::QnnClassifier(m) => m.predict(features, counter, exec),
            Model::QnnRegressor(m) => m.predict(features, counter, exec),
            Model::QekClassifier(m) => m.predict(features, counter, exec),
            Model::RbmClusterer(m) => Ok(m.predict(features)?.into_iter().map(|c| c as f64).collect()),
        }
    }

    /// Mean accuracy for classifiers, R² for the regressor, silhouette for
    /// the clusterer.
    pub fn score(&self, data: &Dataset, counter: &CallCounter, exec: Exec) -> Result<Score> {
        let value = match self {
            Model::QnnClassifier(m) => m.score(data, counter, exec)?,
            Model::QnnRegressor(m) => m.score(data, counter, exec)?,
            Model::QekClassifier(m) => m.score(data, counter, exec)?,
            Model::RbmClusterer(m) => m.score(data, exec)?,
        };
        Ok(Score {
            value,
            kind: self.score_kind(),
        })
    }
}
