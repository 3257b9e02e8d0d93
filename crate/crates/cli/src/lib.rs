//! Batch front-end for the update summarizer: configuration, the
//! `summarize` and `evaluate` pipelines, and the noise and novelty-factor
//! experiments.

pub mod config;
pub mod error;
pub mod experiments;
pub mod run;

pub use config::{ConfigLayer, RunConfig};
pub use error::{CliError, CliResult};
