//! Data embeddings, trainable layer templates and the registries that
//! define the search space.

mod embedding;
mod layer;
mod registry;

pub use embedding::{embed, EmbeddingKind, EmbeddingMethod, OptionValue, RotationAxis, StatePrep};
pub use layer::{build_layer, LayerKind, LayerTemplate};
pub use registry::{ModelFamily, ModelKind, Registry, RegistryEntry, Task};
