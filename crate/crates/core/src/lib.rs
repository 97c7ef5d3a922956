//! Auto quantum machine learning on an embedded statevector simulator.
//!
//! Given a dataset and a task, [`finder::find_model`] searches model
//! families, circuit architectures and hyperparameters, trains candidates,
//! and returns the model that meets a quality threshold with the fewest
//! simulated device calls.

pub mod data;
pub mod datasets;
pub mod embed;
pub mod error;
pub mod exec;
pub mod finder;
pub mod models;
pub mod qsim;
pub mod rng;
pub mod store;
pub mod train;

pub use error::{Error, Result};
