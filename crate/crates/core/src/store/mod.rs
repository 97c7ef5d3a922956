//! Persistence: the JSON-lines study store, trained-model files, and the
//! CSV study report.

mod model_file;
mod report;
mod study_store;

pub use model_file::{ClustererShape, EmbeddingSpec, Extras, Metadata, ModelSpecFile, FORMAT_VERSION};
pub use report::{summarize, write_report};
pub use study_store::{load_records, StudyStore};
