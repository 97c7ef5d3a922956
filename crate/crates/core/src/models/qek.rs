use nalgebra::{DMatrix, DVector};

use super::kernel::{kernel_matrix, training_kernel, FeatureMap};
use super::metrics::accuracy;
use super::validate_binary_labels;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::qsim::{CallCounter, CircuitSpec};
use crate::train::{BudgetLedger, Phase};

pub const DEFAULT_RIDGE: f64 = 1e-3;

/// Kernel ridge classifier over a fidelity kernel. The feature-map
/// weights are fixed at construction; training only solves for the dual
/// coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct QekClassifier {
    pub circuit: CircuitSpec,
    pub weights: Vec<f64>,
    pub ridge_lambda: f64,
    pub support: Vec<Vec<f64>>,
    pub dual_coeffs: Vec<f64>,
}

impl QekClassifier {
    pub fn new(circuit: CircuitSpec, weights: Vec<f64>, ridge_lambda: f64) -> Result<Self> {
        if weights.len() != circuit.param_count() {
            return Err(Error::WeightLength {
                expected: circuit.param_count(),
                got: weights.len(),
            });
        }
        Ok(Self {
            circuit,
            weights,
            ridge_lambda,
            support: Vec::new(),
            dual_coeffs: Vec::new(),
        })
    }

    pub fn feature_map(&self) -> FeatureMap<'_> {
        FeatureMap {
            circuit: &self.circuit,
            weights: &self.weights,
        }
    }

    /// Solve `(K + λI) α = t` with `t = 1 − 2y`; kernel calls go to the
    /// ledger's kernel phase. Returns the training accuracy, read off `Kα`
    /// without further kernel evaluations.
    pub fn fit(&mut self, data: &Dataset, ledger: &BudgetLedger, exec: Exec) -> Result<f64> {
        if !(self.ridge_lambda > 0.0 && self.ridge_lambda.is_finite()) {
            return Err(Error::InvalidRidge(self.ridge_lambda));
        }
        let labels = data.targets()?;
        validate_binary_labels(labels)?;
        let k = training_kernel(self.feature_map(), &data.features, ledger.counter(Phase::Kernel), exec)?;
        let t = DVector::from_iterator(labels.len(), labels.iter().map(|y| 1.0 - 2.0 * y));
        let alpha = ridge_solve(k.clone(), self.ridge_lambda, &t)?;
        let predicted: Vec<f64> = (&k * &alpha).iter().map(|&d| if d < 0.0 { 1.0 } else { 0.0 }).collect();
        self.dual_coeffs = alpha.iter().copied().collect();
        self.support = data.features.clone();
        accuracy(&predicted, labels)
    }

    /// `Σ_i α_i k(x_i, x)` for every row of `features`; negative means class 1.
    pub fn decision_function(&self, features: &[Vec<f64>], counter: &CallCounter, exec: Exec) -> Result<Vec<f64>> {
        if self.support.is_empty() {
            return Err(Error::NotTrained);
        }
        let k = kernel_matrix(self.feature_map(), features, &self.support, counter, exec)?;
        let alpha = DVector::from_column_slice(&self.dual_coeffs);
        Ok((k * alpha).iter().copied().collect())
    }

    pub fn predict(&self, features: &[Vec<f64>], counter: &CallCounter, exec: Exec) -> Result<Vec<f64>> {
        Ok(self
            .decision_function(features, counter, exec)?
            .into_iter()
            .map(|d| if d < 0.0 { 1.0 } else { 0.0 })
            .collect())
    }

    pub fn score(&self, data: &Dataset, counter: &CallCounter, exec: Exec) -> Result<f64> {
        let predicted = self.predict(&data.features, counter, exec)?;
        accuracy(&predicted, data.targets()?)
    }
}

/// `(K + λI)⁻¹ t` by Cholesky, with an LU fallback for kernels that are
/// only numerically PSD.
pub fn ridge_solve(mut k: DMatrix<f64>, lambda: f64, t: &DVector<f64>) -> Result<DVector<f64>> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidRidge(lambda));
    }
    for i in 0..k.nrows() {
        k[(i, i)] += lambda;
    }
    if let Some(chol) = k.clone().cholesky() {
        return Ok(chol.solve(t));
    }
    k.lu()
        .solve(t)
        .ok_or_else(|| Error::InvalidConfig("kernel system is singular".into()))
}
