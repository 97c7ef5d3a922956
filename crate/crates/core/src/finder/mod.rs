//! Model search: trials, suggestion procedures, the call-minimizing
//! model finder, and the optimizer-comparison tuner.

mod record;
mod study;
mod suggest;
mod trial;
mod tuner;

pub use record::{select_best, select_highest_score, Selection, TrialRecord, TrialStatus};
pub use study::{find_model, options_for_trial, run_trial, seed_for_run, FindOutcome, FinderConfig};
pub use suggest::{
    compression_bounds, suggest_embedding, suggest_layers, suggest_supervised_kwargs, suggest_unsupervised_kwargs,
    ModelOptions, SupervisedOptions, UnsupervisedOptions,
};
pub use trial::{ParamValue, RandomSampler, Sampler, Trial};
pub use tuner::{find_hyperparameters, suggest_optimizer, TunerConfig, TunerOutcome};
