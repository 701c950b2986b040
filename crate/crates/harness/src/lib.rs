//! Monte Carlo experiments over the `randorder` algorithms.

pub mod config;
pub mod experiment;
pub mod instances;
pub mod summary;

use std::path::PathBuf;

pub use config::{EstimatorKind, ExperimentConfig, Family, Mode};
pub use experiment::{run_experiment, run_trial, write_csv, KResult, TrialRecord};
pub use summary::{summarize, wilson_interval, Summary};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] randorder::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl HarnessError {
    /// Process exit code: 2 for usage errors, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Usage(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
