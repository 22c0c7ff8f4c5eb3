use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("invalid parameters ({case}): {source}")]
    Params {
        case: String,
        #[source]
        source: toda_core::TodaError,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("missing report: {0}")]
    MissingReport(PathBuf),
}

impl LabError {
    /// Process exit code: configuration and input problems map to 2.
    pub fn exit_code(&self) -> i32 {
        2
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io { path: path.into(), source }
    }
}

pub type LabResult<T> = Result<T, LabError>;
