//! File formats, experiment harness and validators around `relspan-core`.

pub mod config;
pub mod experiment;
pub mod formats;
pub mod verify;

pub use config::{Config, Preset};
pub use experiment::{run_experiment, ExperimentResult, Row, CSV_HEADER};
