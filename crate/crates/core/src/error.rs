use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("wire {wire} out of range for a {n_wires}-wire state")]
    WireOutOfRange { wire: usize, n_wires: usize },
    #[error("gate wires must be distinct, got {0:?}")]
    RepeatedWire(Vec<usize>),
    #[error("gate {kind} expects {expected} angle(s), got {got}")]
    AngleCount {
        kind: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("gate {kind} expects {expected} wire(s), got {got}")]
    WireCount {
        kind: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{0} wires requested; the simulator supports 1..={max}", max = crate::qsim::MAX_WIRES)]
    TooManyWires(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("expected {expected} weights, got {got}")]
    WeightLength { expected: usize, got: usize },
    #[error("embedding {embedding} cannot take {features} features on {n_wires} wires")]
    EmbeddingInput {
        embedding: String,
        features: usize,
        n_wires: usize,
    },
    #[error("amplitude embedding of an all-zero vector is undefined")]
    ZeroAmplitudeInput,
    #[error("amplitude embedding without normalization needs a unit-norm input (norm {0})")]
    UnnormalizedAmplitudeInput(f64),
    #[error("gate {0} in a trainable position cannot be differentiated by parameter shift")]
    NotShiftable(&'static str),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("duplicate {table} name {name:?}")]
    DuplicateName { table: &'static str, name: String },
    #[error("unknown {table} name {name:?}")]
    UnknownName { table: &'static str, name: String },
    #[error("{0} registry is empty")]
    EmptyRegistry(&'static str),
    #[error("no registered embedding accepts {features} features")]
    NoCompatibleEmbedding { features: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("empty dataset")]
    EmptyData,
    #[error("training labels contain a single class")]
    SingleClass,
    #[error("labels must be 0 or 1, found {0}")]
    NonBinaryLabel(f64),
    #[error("constant regression targets cannot be rescaled")]
    ConstantTargets,
    #[error("ridge regularizer must be > 0, got {0}")]
    InvalidRidge(f64),
    #[error("silhouette undefined for {n_clusters} cluster(s) over {n_samples} samples")]
    SilhouetteUndefined { n_clusters: usize, n_samples: usize },
    #[error("model family {0} is not gradient trained")]
    UnsupportedModel(String),
    #[error("model is not trained")]
    NotTrained,
    #[error("trial panicked: {0}")]
    TrialPanicked(String),
    #[error("study produced no complete trials")]
    StudyFailed,

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("corrupt store record at index {index}: {message}")]
    CorruptRecord { index: usize, message: String },
    #[error("model file: {0}")]
    ModelFormat(String),
    #[error("data file: {0}")]
    Data(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
