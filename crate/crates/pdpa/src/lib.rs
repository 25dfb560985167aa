//! File formats, configuration and commands around `pdpa-core`: PDB and
//! dataset IO, parallel library screening, funnel plots and benchmarks.

pub mod bench;
pub mod commands;
pub mod config;
pub mod dataset;
pub mod error;
pub mod fetch;
pub mod pdb;
pub mod records;
pub mod scatter;
pub mod screen;
pub mod tensors;

pub use config::{ExperimentConfig, LoadedConfig};
pub use error::{AppError, AppResult};
