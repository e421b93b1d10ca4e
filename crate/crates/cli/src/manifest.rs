use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparator {
    Le,
    Lt,
    Ge,
    Gt,
}

impl Comparator {
    pub fn holds(self, value: f64, threshold: f64) -> bool {
        match self {
            Comparator::Le => value <= threshold,
            Comparator::Lt => value < threshold,
            Comparator::Ge => value >= threshold,
            Comparator::Gt => value > threshold,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Comparator::Le => "<=",
            Comparator::Lt => "<",
            Comparator::Ge => ">=",
            Comparator::Gt => ">",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Expectation {
    pub criterion: u8,
    pub metric: String,
    pub comparator: Comparator,
    pub threshold: f64,
}

impl Expectation {
    pub fn new(criterion: u8, metric: &str, comparator: Comparator, threshold: f64) -> Self {
        Expectation {
            criterion,
            metric: metric.to_string(),
            comparator,
            threshold,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectationResult {
    #[serde(flatten)]
    pub expectation: Expectation,
    /// `None` when the preset did not produce the metric (counts as failure).
    pub value: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub preset: String,
    pub tool_version: String,
    pub config_hash: String,
    /// Resolved run configuration or scan parameters.
    pub config: serde_json::Value,
    pub seed: u64,
    pub threads: usize,
    pub started_at: String,
    pub finished_at: String,
    pub wall_seconds: f64,
    pub output_dir: PathBuf,
    /// Paths relative to `output_dir`.
    pub outputs: Vec<String>,
    pub metrics: BTreeMap<String, f64>,
    pub expectations: Vec<ExpectationResult>,
    pub passed: bool,
}

impl RunManifest {
    /// Writes `manifest.json` via a temporary file and rename.
    pub fn write_atomic(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join("manifest.json");
        let tmp = dir.join(".manifest.json.tmp");
        {
            let mut f = fs::File::create(&tmp)?;
            serde_json::to_writer_pretty(&mut f, self)?;
            f.write_all(b"\n")?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ExpectationResult> {
        self.expectations.iter().filter(|e| !e.pass)
    }
}

pub fn evaluate(expected: &[Expectation], metrics: &BTreeMap<String, f64>) -> Vec<ExpectationResult> {
    expected
        .iter()
        .map(|e| {
            let value = metrics.get(&e.metric).copied();
            ExpectationResult {
                expectation: e.clone(),
                value,
                pass: value.is_some_and(|v| e.comparator.holds(v, e.threshold)),
            }
        })
        .collect()
}
