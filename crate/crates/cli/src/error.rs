use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] mzk_core::Error),

    #[error("{path}: {message}")]
    Config { path: PathBuf, message: String },

    #[error("unknown preset `{name}`; available: {}", available.join(", "))]
    UnknownPreset { name: String, available: Vec<String> },

    #[error("{0}")]
    Usage(String),

    #[error("preset `{preset}` failed: {source}")]
    Preset {
        preset: String,
        #[source]
        source: Box<CliError>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
