//! File formats, experiment campaigns and statistics on top of `docsat-core`.
//!
//! * [`dimacs`]: DIMACS CNF reader and canonical writer.
//! * [`results`]: CSV schemas of the experiment outputs.
//! * [`config`]: the JSON experiment configuration.
//! * [`experiment`]: parallel, deterministic solver campaigns.
//! * [`summary`]: instance aggregation, scaling fit and rate comparisons.

use std::path::{Path, PathBuf};

use thiserror::Error;

pub mod config;
pub mod dimacs;
pub mod experiment;
pub mod results;
pub mod summary;

pub use config::{ExperimentConfig, SolverSpec, SuiteSpec, TrialSpec};
pub use dimacs::{parse_dimacs, write_dimacs, DimacsError};
pub use experiment::{run_campaign, run_experiment, CampaignResult, Instance};
pub use summary::{aggregate_summary, fit_scaling, rate_report, FitResult, SummaryError};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{}: {source}", path.display())]
    Dimacs { path: PathBuf, source: DimacsError },
    #[error(transparent)]
    Core(#[from] docsat_core::Error),
    #[error(transparent)]
    Summary(#[from] SummaryError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
}

impl BenchError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        BenchError::Io { path: path.to_path_buf(), source }
    }

    /// Usage and configuration problems, as opposed to failures while running.
    pub fn is_config(&self) -> bool {
        matches!(self, BenchError::Config(_) | BenchError::Json(_))
    }
}
