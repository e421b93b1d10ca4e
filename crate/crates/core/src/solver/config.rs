use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::spectral::{GridSpec, InitialCondition};

fn default_t_start() -> f64 {
    1.0
}

fn default_dt_max() -> f64 {
    0.1
}

fn default_cfl() -> f64 {
    0.5
}

fn default_boundary_threshold() -> f64 {
    1e-6
}

/// Parameters of one simulation on `[t_start, t_end]`.
///
/// Defaults: `t_start = 1`, `dt_max = 0.1`, `cfl_safety = 0.5`,
/// `boundary_mass_threshold = 1e-6`, `output_times = []`,
/// `ic` = Gaussian of width 4 at the origin, `linear_only = false`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridSpec,
    #[serde(default)]
    pub ic: InitialCondition,
    pub epsilon: f64,
    #[serde(default = "default_t_start")]
    pub t_start: f64,
    pub t_end: f64,
    #[serde(default = "default_dt_max")]
    pub dt_max: f64,
    #[serde(default = "default_cfl")]
    pub cfl_safety: f64,
    #[serde(default)]
    pub output_times: Vec<f64>,
    #[serde(default = "default_boundary_threshold")]
    pub boundary_mass_threshold: f64,
    /// Drop the cubic term (pure linear flow through the same stepper).
    #[serde(default)]
    pub linear_only: bool,
}

impl RunConfig {
    pub fn new(grid: GridSpec, ic: InitialCondition, epsilon: f64, t_end: f64) -> Self {
        RunConfig {
            grid,
            ic,
            epsilon,
            t_start: default_t_start(),
            t_end,
            dt_max: default_dt_max(),
            cfl_safety: default_cfl(),
            output_times: Vec::new(),
            boundary_mass_threshold: default_boundary_threshold(),
            linear_only: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        self.ic.validate()?;
        if !(self.epsilon >= 0.0) || !self.epsilon.is_finite() {
            return Err(Error::arg("epsilon", format!("must be finite and >= 0, got {}", self.epsilon)));
        }
        if !self.t_start.is_finite() || self.t_start < 0.0 {
            return Err(Error::arg("t_start", format!("must be finite and >= 0, got {}", self.t_start)));
        }
        if !(self.t_end > self.t_start) || !self.t_end.is_finite() {
            return Err(Error::arg(
                "t_end",
                format!("must exceed t_start = {}, got {}", self.t_start, self.t_end),
            ));
        }
        if !(self.dt_max > 0.0) || !self.dt_max.is_finite() {
            return Err(Error::arg("dt_max", format!("must be positive, got {}", self.dt_max)));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety < 1.0) {
            return Err(Error::arg(
                "cfl_safety",
                format!("must lie in (0, 1), got {}", self.cfl_safety),
            ));
        }
        if !(self.boundary_mass_threshold > 0.0) {
            return Err(Error::arg("boundary_mass_threshold", "must be positive"));
        }
        for (i, &t) in self.output_times.iter().enumerate() {
            if !(t >= self.t_start && t <= self.t_end) {
                return Err(Error::arg(
                    "output_times",
                    format!("{t} outside [{}, {}]", self.t_start, self.t_end),
                ));
            }
            if i > 0 && t <= self.output_times[i - 1] {
                return Err(Error::arg("output_times", "must be strictly increasing"));
            }
        }
        Ok(())
    }

    /// Hex SHA-256 of the canonical JSON encoding.
    pub fn config_hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("RunConfig serializes");
        Sha256::digest(&json)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}
