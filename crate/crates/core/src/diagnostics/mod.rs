//! Norms along a trajectory, power-law fits, and scattering diagnostics.

mod fit;
mod norms;
mod scatter;

pub use fit::{decay_fit, linear_regression, DecayFit};
pub use norms::{boundary_mass, norms, NormOptions, NormReport};
pub use scatter::{
    cubic_amplitude_scan, scattering_report, xnorm, CubicScan, CubicScanRow, DyadicIncrement,
    ScatteringReport,
};
