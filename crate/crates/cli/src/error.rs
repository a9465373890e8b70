use std::path::PathBuf;

use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] renyi::Error),

    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },

    #[error("{0}")]
    Usage(String),

    #[error("malformed input: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// Machine-readable form printed on standard error.
    pub fn to_json(&self) -> Value {
        let kind = match self {
            CliError::Core(e) => e.kind(),
            CliError::Read { .. } => "read",
            CliError::Write { .. } => "write",
            CliError::Usage(_) => "usage",
            CliError::Json(_) => "json",
            CliError::Csv(_) => "csv",
        };
        let mut out = json!({ "error": kind, "message": self.to_string() });
        if let CliError::Core(renyi::Error::AlphabetTooSmall { t, minimum }) = self {
            out["t"] = json!(t);
            out["minimum"] = u64::try_from(*minimum).map(Value::from).unwrap_or_else(|_| json!(minimum.to_string()));
        }
        out
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
