//! Batch experiment runner: reads a JSON config, runs one engine, re-checks
//! the answer independently and writes JSON, CSV and optional LaTeX.

pub mod config;
pub mod error;
pub mod output;
pub mod run;
pub mod sequence;
pub mod verify;

pub use config::{Command, ExperimentConfig};
pub use error::{CliError, CliResult};
pub use run::{run, RunOutput, Verification};
pub use sequence::sequence_spec;
