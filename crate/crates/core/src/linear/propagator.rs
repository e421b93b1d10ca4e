use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::solver::SimState;
use crate::spectral::{Field, Frame, Grid, GridSpec, Multiplier, SpectralField};

/// Applies the exact linear flow over `dt`.
pub fn propagate_linear(grid: &Grid, sf: &SpectralField, dt: f64) -> Result<SpectralField> {
    let mut out = grid.apply_multiplier(sf, Multiplier::LinearSemigroup { t: dt })?;
    out.time = sf.time + dt;
    Ok(out)
}

/// Spectral coefficients of the profile `f(t) = e^{tL} v(t)`, i.e.
/// `f^(t, k) = e^{-i t (k_a^3 + k_b^3)} v^(t, k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileSnapshot {
    pub grid: GridSpec,
    pub time: f64,
    pub coeffs: Vec<Complex64>,
}

impl ProfileSnapshot {
    pub fn from_spectral(grid: &Grid, v: &SpectralField) -> Result<Self> {
        let f = grid.apply_multiplier(v, Multiplier::LinearSemigroup { t: -v.time })?;
        Ok(ProfileSnapshot {
            grid: *grid.spec(),
            time: v.time,
            coeffs: f.coeffs,
        })
    }

    /// The solution `v(t)` this profile describes.
    pub fn to_spectral(&self, grid: &Grid) -> Result<SpectralField> {
        let f = SpectralField {
            grid: self.grid,
            coeffs: self.coeffs.clone(),
            time: self.time,
        };
        grid.apply_multiplier(&f, Multiplier::LinearSemigroup { t: self.time })
    }

    /// The profile itself as a spectral field (no time factor applied).
    pub fn as_spectral(&self) -> SpectralField {
        SpectralField {
            grid: self.grid,
            coeffs: self.coeffs.clone(),
            time: self.time,
        }
    }

    /// `f` in physical space.
    pub fn physical(&self, grid: &Grid) -> Result<Field> {
        grid.inverse(&self.as_spectral())
    }

    /// `H^s` norm (the linear flow is an isometry on every `H^s`).
    pub fn hs_norm(&self, grid: &Grid, s: f64) -> f64 {
        hs_norm_coeffs(grid, &self.coeffs, s)
    }

    pub fn hs_distance(&self, other: &ProfileSnapshot, grid: &Grid, s: f64) -> Result<f64> {
        self.grid.check_same(&other.grid)?;
        let diff: Vec<Complex64> = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(hs_norm_coeffs(grid, &diff, s))
    }

    pub fn hermitian_defect(&self) -> f64 {
        self.as_spectral().hermitian_defect()
    }
}

/// `sqrt(area * sum <k>^{2s} |c_k|^2)`.
pub fn hs_norm_coeffs(grid: &Grid, coeffs: &[Complex64], s: f64) -> f64 {
    let sum: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(idx, c)| {
            let w = grid.japanese_sq(idx);
            let w = if s == 0.0 { 1.0 } else { w.powf(s) };
            w * c.norm_sqr()
        })
        .sum();
    (grid.spec().area() * sum).sqrt()
}

/// Profile of a solver state.
pub fn profile_of(grid: &Grid, state: &SimState) -> Result<ProfileSnapshot> {
    if state.field.frame != Frame::Ab {
        return Err(Error::FrameMismatch { expected: "ab" });
    }
    ProfileSnapshot::from_spectral(grid, &state.spectral)
}
