use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::{EmbeddingKind, LayerKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Classification,
    Regression,
    Clustering,
}

impl Task {
    pub fn as_str(self) -> &'static str {
        match self {
            Task::Classification => "classification",
            Task::Regression => "regression",
            Task::Clustering => "clustering",
        }
    }

    pub fn is_supervised(self) -> bool {
        !matches!(self, Task::Clustering)
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "classification" => Ok(Task::Classification),
            "regression" => Ok(Task::Regression),
            "clustering" => Ok(Task::Clustering),
            other => Err(Error::UnknownName {
                table: "task",
                name: other.to_string(),
            }),
        }
    }
}

/// Which model implementation a family constructs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    QnnClassifier,
    QnnRegressor,
    QekClassifier,
    RbmClusterer,
}

impl ModelKind {
    pub fn task(self) -> Task {
        match self {
            ModelKind::QnnClassifier | ModelKind::QekClassifier => Task::Classification,
            ModelKind::QnnRegressor => Task::Regression,
            ModelKind::RbmClusterer => Task::Clustering,
        }
    }

    pub fn is_gradient_trained(self) -> bool {
        matches!(self, ModelKind::QnnClassifier | ModelKind::QnnRegressor)
    }
}

/// A searchable model family: constructor tag plus its tunable ranges.
///
/// For the clusterer, `n_layers` bounds the encoder depth.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelFamily {
    pub name: String,
    pub kind: ModelKind,
    pub n_layers: (u32, u32),
    pub int_ranges: IndexMap<String, (i64, i64)>,
    pub float_ranges: IndexMap<String, (f64, f64)>,
    pub fixed: IndexMap<String, f64>,
}

impl ModelFamily {
    pub fn new(name: impl Into<String>, kind: ModelKind, n_layers: (u32, u32)) -> Self {
        Self {
            name: name.into(),
            kind,
            n_layers,
            int_ranges: IndexMap::new(),
            float_ranges: IndexMap::new(),
            fixed: IndexMap::new(),
        }
    }

    pub fn with_int(mut self, name: &str, low: i64, high: i64) -> Self {
        self.int_ranges.insert(name.into(), (low, high));
        self
    }

    pub fn with_float(mut self, name: &str, low: f64, high: f64) -> Self {
        self.float_ranges.insert(name.into(), (low, high));
        self
    }

    pub fn with_fixed(mut self, name: &str, value: f64) -> Self {
        self.fixed.insert(name.into(), value);
        self
    }

    pub fn task(&self) -> Task {
        self.kind.task()
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.n_layers;
        if lo < 1 || hi < lo {
            return Err(Error::InvalidConfig(format!(
                "model {} has n_layers bounds ({lo}, {hi})",
                self.name
            )));
        }
        for (name, &(lo, hi)) in &self.int_ranges {
            if hi < lo {
                return Err(Error::InvalidConfig(format!("{name} range ({lo}, {hi})")));
            }
        }
        for (name, &(lo, hi)) in &self.float_ranges {
            if !(lo <= hi) {
                return Err(Error::InvalidConfig(format!("{name} range ({lo}, {hi})")));
            }
        }
        Ok(())
    }
}

pub enum RegistryEntry {
    Embedding(EmbeddingKind),
    Layer(LayerKind),
    Model(ModelFamily),
}

impl From<EmbeddingKind> for RegistryEntry {
    fn from(e: EmbeddingKind) -> Self {
        RegistryEntry::Embedding(e)
    }
}

impl From<LayerKind> for RegistryEntry {
    fn from(l: LayerKind) -> Self {
        RegistryEntry::Layer(l)
    }
}

impl From<ModelFamily> for RegistryEntry {
    fn from(m: ModelFamily) -> Self {
        RegistryEntry::Model(m)
    }
}

/// Name-keyed tables of embeddings, layers and model families. Iteration
/// order is registration order, which fixes the categorical domains the
/// sampler draws from.
#[derive(Debug, Clone, Default)]
pub struct Registry {
    embeddings: IndexMap<String, EmbeddingKind>,
    layers: IndexMap<String, LayerKind>,
    models: IndexMap<String, ModelFamily>,
}

impl Registry {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn register(&mut self, entry: impl Into<RegistryEntry>) -> Result<()> {
        match entry.into() {
            RegistryEntry::Embedding(e) => insert_unique(&mut self.embeddings, "embedding", e.name.clone(), e),
            RegistryEntry::Layer(l) => insert_unique(&mut self.layers, "layer", l.name.clone(), l),
            RegistryEntry::Model(m) => {
                m.validate()?;
                insert_unique(&mut self.models, "model", m.name.clone(), m)
            }
        }
    }

    pub fn with(mut self, entry: impl Into<RegistryEntry>) -> Result<Self> {
        self.register(entry)?;
        Ok(self)
    }

    pub fn embeddings(&self) -> impl Iterator<Item = &EmbeddingKind> {
        self.embeddings.values()
    }

    pub fn layers(&self) -> impl Iterator<Item = &LayerKind> {
        self.layers.values()
    }

    pub fn models(&self) -> impl Iterator<Item = &ModelFamily> {
        self.models.values()
    }

    pub fn layer_names(&self) -> Vec<String> {
        self.layers.keys().cloned().collect()
    }

    pub fn embedding(&self, name: &str) -> Result<&EmbeddingKind> {
        self.embeddings.get(name).ok_or_else(|| Error::UnknownName {
            table: "embedding",
            name: name.into(),
        })
    }

    pub fn layer(&self, name: &str) -> Result<&LayerKind> {
        self.layers.get(name).ok_or_else(|| Error::UnknownName {
            table: "layer",
            name: name.into(),
        })
    }

    pub fn model(&self, name: &str) -> Result<&ModelFamily> {
        self.models.get(name).ok_or_else(|| Error::UnknownName {
            table: "model",
            name: name.into(),
        })
    }

    pub fn models_for(&self, task: Task) -> Vec<&ModelFamily> {
        self.models.values().filter(|m| m.task() == task).collect()
    }
}

fn insert_unique<T>(table: &mut IndexMap<String, T>, label: &'static str, name: String, value: T) -> Result<()> {
    if table.contains_key(&name) {
        return Err(Error::DuplicateName { table: label, name });
    }
    table.insert(name, value);
    Ok(())
}

impl Registry {
    /// The shipped search space: two embeddings, two layer templates, and
    /// one or two model families per task.
    pub fn builtin() -> Self {
        let mut r = Self::empty();
        let entries: Vec<RegistryEntry> = vec![
            EmbeddingKind::angle().into(),
            EmbeddingKind::amplitude().into(),
            LayerKind::basic_entangler().into(),
            LayerKind::strongly_entangling().into(),
            ModelFamily::new("QNN", ModelKind::QnnClassifier, (1, 3))
                .with_int("batch_size", 15, 25)
                .into(),
            ModelFamily::new("QEK", ModelKind::QekClassifier, (3, 5))
                .with_fixed("ridge_lambda", 1e-3)
                .into(),
            ModelFamily::new("QNNRegressor", ModelKind::QnnRegressor, (1, 3))
                .with_int("batch_size", 15, 25)
                .into(),
            ModelFamily::new("RBM", ModelKind::RbmClusterer, (1, 3))
                .with_float("firing_threshold", 0.3, 0.7)
                .into(),
        ];
        for e in entries {
            r.register(e).expect("builtin registry names are unique");
        }
        r
    }
}
