//! Command-line harness: config parsing, experiment presets, run manifests and
//! report files.

pub mod commands;
pub mod config;
pub mod error;
pub mod experiments;
pub mod manifest;
pub mod output;
pub mod presets;

pub use error::{CliError, Result};
