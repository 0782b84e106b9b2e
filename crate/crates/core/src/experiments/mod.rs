//! Batch front-end: configuration, experiment orchestration, artifact
//! emission.

mod config;
mod run;

pub use config::{Experiment, RunConfig, Tolerances};
pub use run::{run, RunOutcome};
