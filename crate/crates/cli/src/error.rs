use std::path::PathBuf;

use gromov_lab::LabError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: LabError },
    #[error(transparent)]
    Lab(#[from] LabError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}
