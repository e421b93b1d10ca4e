use std::fs;
use std::path::Path;

use mzk_core::solver::RunConfig;

use crate::error::{CliError, Result};

/// Reads and validates a JSON run configuration. Unknown keys are rejected;
/// omitted keys take the defaults documented on [`RunConfig`].
pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path)?;
    parse_config_str(&text).map_err(|message| CliError::Config {
        path: path.to_path_buf(),
        message,
    })
}

pub fn parse_config_str(text: &str) -> std::result::Result<RunConfig, String> {
    let cfg: RunConfig = serde_json::from_str(text).map_err(|e| e.to_string())?;
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}
