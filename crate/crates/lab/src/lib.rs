//! Experiment harness for `rossby-core`: configuration, initial data,
//! single-system runs, the ε-sweep and its CSV/JSON/snapshot output.

use std::path::PathBuf;

use rossby_core::acoustic::AcousticError;
use rossby_core::diagnostics::DiagnosticsError;
use rossby_core::euler::EulerError;
use rossby_core::fields::{FieldError, SnapshotError};
use rossby_core::qg::QgError;
use rossby_core::ThermoError;
use thiserror::Error;

pub mod config;
pub mod data;
pub mod report;
pub mod runs;
pub mod sweep;

pub use config::{ConfigError, ExperimentConfig};
pub use report::SweepSummary;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("config: {0}")]
    Config(#[from] ConfigError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Thermo(#[from] ThermoError),
    #[error("euler solver: {0}")]
    Euler(#[from] EulerError),
    #[error("qg solver: {0}")]
    Qg(#[from] QgError),
    #[error("acoustic solver: {0}")]
    Acoustic(#[from] AcousticError),
    #[error("diagnostics: {0}")]
    Diagnostics(#[from] DiagnosticsError),
    #[error("snapshot: {0}")]
    Snapshot(#[from] SnapshotError),
    #[error("worker pool: {0}")]
    Pool(String),
}
