//! Batch experiment runner for `bo-core`: one TOML config in, CSV/JSON
//! artifacts and a manifest out.

pub mod config;
pub mod describe;
pub mod error;
pub mod run;
pub mod trig;

pub use config::{ExperimentConfig, ExperimentKind, OUTPUT_ROOT_ENV};
pub use describe::describe;
pub use error::CliError;
pub use run::{run, RunOutcome, MANIFEST_FILE};
