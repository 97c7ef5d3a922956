use super::Trial;
use crate::data::Dataset;
use crate::embed::{EmbeddingKind, LayerKind, ModelFamily, ModelKind, Registry};
use crate::error::{Error, Result};
use crate::models::{init_weights, Model, QekClassifier, QnnClassifier, QnnRegressor, RbmClusterer, DEFAULT_RIDGE};
use crate::qsim::CircuitSpec;

/// Everything needed to construct one model instance.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelOptions {
    Supervised(SupervisedOptions),
    Unsupervised(UnsupervisedOptions),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupervisedOptions {
    pub family: String,
    pub kind: ModelKind,
    pub n_wires: usize,
    pub embedding: EmbeddingKind,
    pub layers: Vec<LayerKind>,
    pub batch_size: usize,
    pub ridge_lambda: f64,
    pub n_epochs: usize,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnsupervisedOptions {
    pub family: String,
    pub lbae_input_size: usize,
    pub lbae_out_channels: usize,
    pub rbm_n_visible_neurons: usize,
    pub rbm_n_hidden_neurons: usize,
    pub lbae_n_layers: usize,
    pub firing_threshold: f64,
    pub n_epochs: usize,
}

impl ModelOptions {
    pub fn family(&self) -> &str {
        match self {
            ModelOptions::Supervised(o) => &o.family,
            ModelOptions::Unsupervised(o) => &o.family,
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            ModelOptions::Supervised(o) => o.kind,
            ModelOptions::Unsupervised(_) => ModelKind::RbmClusterer,
        }
    }

    /// Construct an untrained model; all random initial weights derive from `seed`.
    pub fn build(&self, seed: u64) -> Result<Model> {
        match self {
            ModelOptions::Supervised(o) => {
                let circuit = CircuitSpec::new(o.n_wires, o.embedding.clone(), o.layers.clone())?;
                Ok(match o.kind {
                    ModelKind::QnnClassifier => {
                        Model::QnnClassifier(QnnClassifier::new(circuit, o.batch_size, o.threshold, o.n_epochs, seed))
                    }
                    ModelKind::QnnRegressor => {
                        Model::QnnRegressor(QnnRegressor::new(circuit, o.batch_size, o.threshold, o.n_epochs, seed))
                    }
                    ModelKind::QekClassifier => {
                        let circuit = circuit.with_reupload(true);
                        let weights = init_weights(circuit.param_count(), seed);
                        Model::QekClassifier(QekClassifier::new(circuit, weights, o.ridge_lambda)?)
                    }
                    ModelKind::RbmClusterer => {
                        return Err(Error::InvalidConfig("clusterer needs unsupervised options".into()))
                    }
                })
            }
            ModelOptions::Unsupervised(o) => Ok(Model::RbmClusterer(RbmClusterer::new(
                o.lbae_input_size,
                o.lbae_n_layers,
                o.lbae_out_channels,
                o.rbm_n_hidden_neurons,
                o.firing_threshold,
                o.n_epochs,
                seed,
            )?)),
        }
    }
}

/// Draw an embedding among those that accept `features` inputs on `n_wires`.
pub fn suggest_embedding(
    trial: &mut Trial,
    registry: &Registry,
    features: usize,
    n_wires: usize,
) -> Result<EmbeddingKind> {
    if registry.embeddings().next().is_none() {
        return Err(Error::EmptyRegistry("embedding"));
    }
    let eligible: Vec<String> = registry
        .embeddings()
        .filter(|e| e.accepts(features, n_wires))
        .map(|e| e.name.clone())
        .collect();
    if eligible.is_empty() {
        return Err(Error::NoCompatibleEmbedding { features });
    }
    let name = trial.suggest_categorical("embedding", &eligible)?;
    registry.embedding(&name).cloned()
}

/// `n_layers` categorical draws named `layer_0 … layer_{n-1}`, in order.
pub fn suggest_layers(trial: &mut Trial, n_layers: usize, registry: &Registry) -> Result<Vec<LayerKind>> {
    let names = registry.layer_names();
    if names.is_empty() {
        return Err(Error::EmptyRegistry("layer"));
    }
    (0..n_layers)
        .map(|i| {
            let name = trial.suggest_categorical(&format!("layer_{i}"), &names)?;
            registry.layer(&name).cloned()
        })
        .collect()
}

/// Layer count, embedding, layers, then the family's extra ranges.
pub fn suggest_supervised_kwargs(
    trial: &mut Trial,
    family: &ModelFamily,
    registry: &Registry,
    data: &Dataset,
    n_epochs: usize,
    threshold: f64,
) -> Result<ModelOptions> {
    if family.kind == ModelKind::RbmClusterer {
        return Err(Error::InvalidConfig(format!("{} is not supervised", family.name)));
    }
    let features = data.n_features();
    let (lo, hi) = family.n_layers;
    let n_layers = trial.suggest_int("n_layers", lo as i64, hi as i64)? as usize;
    let embedding = suggest_embedding(trial, registry, features, features)?;
    let n_wires = embedding.wires_for(features);
    let layers = suggest_layers(trial, n_layers, registry)?;

    let mut batch_size = data.n_samples();
    let mut ridge_lambda = family.fixed.get("ridge_lambda").copied().unwrap_or(DEFAULT_RIDGE);
    for (name, &(lo, hi)) in &family.int_ranges {
        let v = trial.suggest_int(name, lo, hi)?;
        if name == "batch_size" {
            batch_size = v.max(1) as usize;
        }
    }
    for (name, &(lo, hi)) in &family.float_ranges {
        let v = trial.suggest_float(name, lo, hi, false)?;
        if name == "ridge_lambda" {
            ridge_lambda = v;
        }
    }
    Ok(ModelOptions::Supervised(SupervisedOptions {
        family: family.name.clone(),
        kind: family.kind,
        n_wires,
        embedding,
        layers,
        batch_size,
        ridge_lambda,
        n_epochs,
        threshold,
    }))
}

fn isqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `[⌊√s⌋, ⌈0.75·s⌉]`, the range used for both the latent width and the
/// hidden-unit count.
pub fn compression_bounds(size: usize) -> (usize, usize) {
    (isqrt(size), (3 * size).div_ceil(4))
}

/// Encoder width, RBM width, encoder depth and firing threshold.
pub fn suggest_unsupervised_kwargs(
    trial: &mut Trial,
    family: &ModelFamily,
    data: &Dataset,
    n_epochs: usize,
) -> Result<ModelOptions> {
    let input_size = data.n_features();
    if input_size < 2 {
        return Err(Error::InvalidConfig(format!(
            "clustering needs at least 2 input features, got {input_size}"
        )));
    }
    let (lo, hi) = compression_bounds(input_size);
    let out_channels = trial.suggest_int("lbae_out_channels", lo as i64, hi as i64)? as usize;
    let (lo, hi) = compression_bounds(out_channels);
    let n_hidden = trial.suggest_int("rbm_n_hidden_neurons", lo as i64, hi as i64)? as usize;
    let (lo, hi) = family.n_layers;
    let n_layers = trial.suggest_int("lbae_n_layers", lo as i64, hi as i64)? as usize;
    let (lo, hi) = family
        .float_ranges
        .get("firing_threshold")
        .copied()
        .unwrap_or((0.3, 0.7));
    let firing_threshold = trial.suggest_float("firing_threshold", lo, hi, false)?;
    Ok(ModelOptions::Unsupervised(UnsupervisedOptions {
        family: family.name.clone(),
        lbae_input_size: input_size,
        lbae_out_channels: out_channels,
        rbm_n_visible_neurons: out_channels,
        rbm_n_hidden_neurons: n_hidden,
        lbae_n_layers: n_layers,
        firing_threshold,
        n_epochs,
    }))
}
