//! Trained-model file: pretty-printed JSON, field order fixed by the
//! struct definitions, reals in shortest round-trip decimal form. Parsing
//! and re-serializing a file reproduces it byte for byte.

use std::path::Path;

use indexmap::IndexMap;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::embed::{LayerKind, ModelKind, OptionValue, Registry, Task};
use crate::error::{Error, Result};
use crate::models::{BinaryEncoder, DenseLayer, Model, QekClassifier, QnnClassifier, QnnRegressor, Rbm, RbmClusterer};
use crate::qsim::CircuitSpec;
use crate::train::OptimizerConfig;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpecFile {
    pub format_version: u32,
    pub task: Task,
    pub model_family: String,
    pub model_kind: ModelKind,
    /// 0 for classical models.
    pub n_wires: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<EmbeddingSpec>,
    pub layers: Vec<String>,
    pub weights: Vec<f64>,
    pub feature_names: Vec<String>,
    pub extras: Extras,
    pub metadata: Metadata,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingSpec {
    pub name: String,
    pub fixed_options: IndexMap<String, OptionValue>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Extras {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub batch_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_epochs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub reupload: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimizer: Option<OptimizerConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_range: Option<(f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ridge_lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_coeffs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clusterer: Option<ClustererShape>,
}

/// Weight layout for the clusterer: each encoder layer (row-major
/// `out × in` matrix, then bias), the decoder likewise, then the RBM
/// matrix (row-major `visible × hidden`), visible bias, hidden bias.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClustererShape {
    pub encoder_widths: Vec<usize>,
    pub n_hidden: usize,
    pub firing_threshold: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub mean_score: Option<f64>,
    pub total_calls: u64,
    pub base_seed: u64,
    pub feasible: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trial_id: Option<u64>,
}

fn push_matrix(out: &mut Vec<f64>, m: &DMatrix<f64>) {
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            out.push(m[(r, c)]);
        }
    }
}

struct Cursor<'a> {
    data: &'a [f64],
    pos: usize,
}

impl Cursor<'_> {
    fn take(&mut self, n: usize) -> Result<&[f64]> {
        let end = self.pos + n;
        let slice = self
            .data
            .get(self.pos..end)
            .ok_or_else(|| Error::ModelFormat(format!("weights end at {} but need {end}", self.data.len())))?;
        self.pos = end;
        Ok(slice)
    }

    fn matrix(&mut self, rows: usize, cols: usize) -> Result<DMatrix<f64>> {
        Ok(DMatrix::from_row_slice(rows, cols, self.take(rows * cols)?))
    }

    fn vector(&mut self, n: usize) -> Result<DVector<f64>> {
        Ok(DVector::from_column_slice(self.take(n)?))
    }
}

impl ModelSpecFile {
    /// Describe `model`. Training-loop settings that the model itself does
    /// not carry (optimizer) are passed alongside.
    pub fn from_model(
        model: &Model,
        family: &str,
        feature_names: Vec<String>,
        optimizer: Option<OptimizerConfig>,
        metadata: Metadata,
    ) -> Self {
        let mut extras = Extras {
            optimizer,
            ..Extras::default()
        };
        let circuit_parts = |c: &CircuitSpec| {
            (
                c.n_wires,
                Some(EmbeddingSpec {
                    name: c.embedding.name.clone(),
                    fixed_options: c.embedding.fixed_options(),
                }),
                c.layers.iter().map(|l| l.name.clone()).collect::<Vec<_>>(),
            )
        };
        let (n_wires, embedding, layers, weights) = match model {
            Model::QnnClassifier(m) => {
                extras.batch_size = Some(m.batch_size);
                extras.n_epochs = Some(m.n_epochs);
                extras.threshold = Some(m.accuracy_threshold);
                let (w, e, l) = circuit_parts(&m.circuit);
                (w, e, l, m.weights.clone())
            }
            Model::QnnRegressor(m) => {
                extras.batch_size = Some(m.batch_size);
                extras.n_epochs = Some(m.n_epochs);
                extras.threshold = Some(m.score_threshold);
                extras.target_range = m.target_range;
                let (w, e, l) = circuit_parts(&m.circuit);
                (w, e, l, m.weights.clone())
            }
            Model::QekClassifier(m) => {
                extras.reupload = m.circuit.reupload;
                extras.ridge_lambda = Some(m.ridge_lambda);
                extras.dual_coeffs = Some(m.dual_coeffs.clone());
                extras.support = Some(m.support.clone());
                let (w, e, l) = circuit_parts(&m.circuit);
                (w, e, l, m.weights.clone())
            }
            Model::RbmClusterer(m) => {
                let mut weights = Vec::new();
                for layer in m.encoder.layers.iter().chain(std::iter::once(&m.encoder.decoder)) {
                    push_matrix(&mut weights, &layer.weights);
                    weights.extend(layer.bias.iter());
                }
                push_matrix(&mut weights, &m.rbm.weights);
                weights.extend(m.rbm.visible_bias.iter());
                weights.extend(m.rbm.hidden_bias.iter());
                let mut widths = vec![m.encoder.input_size()];
                widths.extend(m.encoder.layers.iter().map(|l| l.weights.nrows()));
                extras.n_epochs = Some(m.n_epochs);
                extras.clusterer = Some(ClustererShape {
                    encoder_widths: widths,
                    n_hidden: m.rbm.n_hidden(),
                    firing_threshold: m.firing_threshold,
                });
                (0, None, Vec::new(), weights)
            }
        };
        Self {
            format_version: FORMAT_VERSION,
            task: model.kind().task(),
            model_family: family.to_string(),
            model_kind: model.kind(),
            n_wires,
            embedding,
            layers,
            weights,
            feature_names,
            extras,
            metadata,
        }
    }

    fn circuit(&self, registry: &Registry) -> Result<CircuitSpec> {
        let spec = self
            .embedding
            .as_ref()
            .ok_or_else(|| Error::ModelFormat("quantum model without embedding".into()))?;
        let embedding = registry.embedding(&spec.name)?.clone();
        if embedding.fixed_options() != spec.fixed_options {
            return Err(Error::ModelFormat(format!(
                "embedding {} options {:?} differ from the registry's {:?}",
                spec.name,
                spec.fixed_options,
                embedding.fixed_options()
            )));
        }
        let layers = self
            .layers
            .iter()
            .map(|n| registry.layer(n).cloned())
            .collect::<Result<Vec<LayerKind>>>()?;
        let circuit = CircuitSpec::new(self.n_wires, embedding, layers)?.with_reupload(self.extras.reupload);
        if circuit.param_count() != self.weights.len() {
            return Err(Error::ModelFormat(format!(
                "architecture needs {} weights, file has {}",
                circuit.param_count(),
                self.weights.len()
            )));
        }
        Ok(circuit)
    }

    /// Rebuild the model, resolving embedding and layer names in `registry`.
    pub fn to_model(&self, registry: &Registry) -> Result<Model> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::ModelFormat(format!(
                "unsupported format_version {}",
                self.format_version
            )));
        }
        if self.model_kind.task() != self.task {
            return Err(Error::ModelFormat(format!(
                "{:?} cannot serve task {}",
                self.model_kind, self.task
            )));
        }
        let missing = |what: &str| Error::ModelFormat(format!("missing extras.{what}"));
        let x = &self.extras;
        Ok(match self.model_kind {
            ModelKind::QnnClassifier => Model::QnnClassifier(QnnClassifier {
                circuit: self.circuit(registry)?,
                weights: self.weights.clone(),
                batch_size: x.batch_size.ok_or_else(|| missing("batch_size"))?,
                accuracy_threshold: x.threshold.ok_or_else(|| missing("threshold"))?,
                n_epochs: x.n_epochs.ok_or_else(|| missing("n_epochs"))?,
            }),
            ModelKind::QnnRegressor => Model::QnnRegressor(QnnRegressor {
                circuit: self.circuit(registry)?,
                weights: self.weights.clone(),
                batch_size: x.batch_size.ok_or_else(|| missing("batch_size"))?,
                score_threshold: x.threshold.ok_or_else(|| missing("threshold"))?,
                n_epochs: x.n_epochs.ok_or_else(|| missing("n_epochs"))?,
                target_range: x.target_range,
            }),
            ModelKind::QekClassifier => {
                let mut m = QekClassifier::new(
                    self.circuit(registry)?,
                    self.weights.clone(),
                    x.ridge_lambda.ok_or_else(|| missing("ridge_lambda"))?,
                )?;
                m.dual_coeffs = x.dual_coeffs.clone().unwrap_or_default();
                m.support = x.support.clone().unwrap_or_default();
                if m.dual_coeffs.len() != m.support.len() {
                    return Err(Error::ModelFormat(format!(
                        "{} dual coefficients for {} support points",
                        m.dual_coeffs.len(),
                        m.support.len()
                    )));
                }
                Model::QekClassifier(m)
            }
            ModelKind::RbmClusterer => {
                let shape = x.clusterer.as_ref().ok_or_else(|| missing("clusterer"))?;
                let widths = &shape.encoder_widths;
                if widths.len() < 2 {
                    return Err(Error::ModelFormat("encoder needs at least one layer".into()));
                }
                let mut cur = Cursor {
                    data: &self.weights,
                    pos: 0,
                };
                let mut layers = Vec::new();
                for w in widths.windows(2) {
                    layers.push(DenseLayer {
                        weights: cur.matrix(w[1], w[0])?,
                        bias: cur.vector(w[1])?,
                    });
                }
                let (input, latent) = (widths[0], *widths.last().unwrap());
                let decoder = DenseLayer {
                    weights: cur.matrix(input, latent)?,
                    bias: cur.vector(input)?,
                };
                let rbm = Rbm {
                    weights: cur.matrix(latent, shape.n_hidden)?,
                    visible_bias: cur.vector(latent)?,
                    hidden_bias: cur.vector(shape.n_hidden)?,
                };
                if cur.pos != self.weights.len() {
                    return Err(Error::ModelFormat(format!(
                        "{} trailing weights",
                        self.weights.len() - cur.pos
                    )));
                }
                Model::RbmClusterer(RbmClusterer {
                    encoder: BinaryEncoder { layers, decoder },
                    rbm,
                    firing_threshold: shape.firing_threshold,
                    n_epochs: x.n_epochs.unwrap_or(0),
                })
            }
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::ModelFormat(e.to_string()))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}
