use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::coords::{ab_to_xy, two_two_thirds, xy_to_ab, AMPLITUDE_FACTOR};
use super::field::{Field, Frame, SpectralField};
use super::grid::Grid;
use super::window::{smooth_cutoff, wrap};
use crate::error::{Error, Result};

/// Closed-form initial data. Amplitudes are multiplied by the run's epsilon.
/// Centres and modulation wavevectors are given in the `(x, y)` frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialCondition {
    /// `eps exp(-|z - c|^2 / w^2) cos(q . (z - c))` in `(x, y)`.
    Gaussian {
        width: f64,
        #[serde(default)]
        center: [f64; 2],
        #[serde(default)]
        modulation: Option<[f64; 2]>,
    },
    /// The Gaussian above with its Fourier transform multiplied by a smooth
    /// per-axis cutoff in `(k_a, k_b)`; 1 below `k_pass`, 0 above `k_stop`.
    /// Only defined in the `ab` frame; coefficients are evaluated from the
    /// analytic transform.
    BandLimitedGaussian {
        width: f64,
        k_pass: f64,
        k_stop: f64,
        #[serde(default)]
        center: [f64; 2],
    },
    /// `eps cos(k_a x_1 + k_b x_2)` on the grid axes, in either frame.
    Cosine { k_a: f64, k_b: f64 },
}

impl Default for InitialCondition {
    fn default() -> Self {
        InitialCondition::Gaussian {
            width: 4.0,
            center: [0.0, 0.0],
            modulation: None,
        }
    }
}

impl InitialCondition {
    pub fn validate(&self) -> Result<()> {
        let finite = |name: &'static str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::arg(name, format!("{v} is not finite")))
            }
        };
        match self {
            InitialCondition::Gaussian {
                width,
                center,
                modulation,
            } => {
                if !(*width > 0.0 && width.is_finite()) {
                    return Err(Error::arg("width", "must be positive"));
                }
                center.iter().try_for_each(|&c| finite("center", c))?;
                if let Some(q) = modulation {
                    q.iter().try_for_each(|&c| finite("modulation", c))?;
                }
            }
            InitialCondition::BandLimitedGaussian {
                width,
                k_pass,
                k_stop,
                center,
            } => {
                if !(*width > 0.0 && width.is_finite()) {
                    return Err(Error::arg("width", "must be positive"));
                }
                if !(*k_pass >= 0.0 && k_stop > k_pass && k_stop.is_finite()) {
                    return Err(Error::arg("k_stop", "need 0 <= k_pass < k_stop < inf"));
                }
                center.iter().try_for_each(|&c| finite("center", c))?;
            }
            InitialCondition::Cosine { k_a, k_b } => {
                finite("k_a", *k_a)?;
                finite("k_b", *k_b)?;
            }
        }
        Ok(())
    }

    /// Bump centre in the `ab` frame; weighted norms are measured from here.
    pub fn center_ab(&self) -> (f64, f64) {
        match self {
            InitialCondition::Gaussian { center, .. }
            | InitialCondition::BandLimitedGaussian { center, .. } => xy_to_ab(center[0], center[1]),
            InitialCondition::Cosine { .. } => (0.0, 0.0),
        }
    }
}

/// Samples the initial data on `grid` in the requested frame. Converting the
/// `xy` formula to the `ab` frame includes the factor `2^{-1/2}`.
pub fn evaluate_ic(ic: &InitialCondition, epsilon: f64, grid: &Grid, frame: Frame) -> Result<Field> {
    ic.validate()?;
    if !epsilon.is_finite() {
        return Err(Error::arg("epsilon", "not finite"));
    }
    let spec = *grid.spec();
    let mut field = Field::zeros(spec, frame);
    match *ic {
        InitialCondition::Gaussian {
            width,
            center,
            modulation,
        } => {
            let q = modulation.unwrap_or([0.0, 0.0]);
            let profile = |dx: f64, dy: f64| {
                (-(dx * dx + dy * dy) / (width * width)).exp() * (q[0] * dx + q[1] * dy).cos()
            };
            let (ca, cb) = xy_to_ab(center[0], center[1]);
            for (i, &xa) in grid.a.x.iter().enumerate() {
                for (j, &xb) in grid.b.x.iter().enumerate() {
                    let value = match frame {
                        Frame::Xy => {
                            let dx = wrap(xa - center[0], spec.len_a);
                            let dy = wrap(xb - center[1], spec.len_b);
                            epsilon * profile(dx, dy)
                        }
                        Frame::Ab => {
                            let da = wrap(xa - ca, spec.len_a);
                            let db = wrap(xb - cb, spec.len_b);
                            let (dx, dy) = ab_to_xy(da, db);
                            AMPLITUDE_FACTOR * epsilon * profile(dx, dy)
                        }
                    };
                    field.values[grid.flat(i, j)] = value;
                }
            }
        }
        InitialCondition::BandLimitedGaussian { .. } => {
            if frame != Frame::Ab {
                return Err(Error::UnsupportedInitialCondition(
                    "band_limited_gaussian is defined in the ab frame only".into(),
                ));
            }
            let sf = band_limited_coefficients(ic, epsilon, grid);
            field = grid.inverse(&sf)?;
        }
        InitialCondition::Cosine { k_a, k_b } => {
            for (i, &x1) in grid.a.x.iter().enumerate() {
                for (j, &x2) in grid.b.x.iter().enumerate() {
                    field.values[grid.flat(i, j)] = epsilon * (k_a * x1 + k_b * x2).cos();
                }
            }
        }
    }
    field.frame = frame;
    field.time = 0.0;
    Ok(field)
}

fn band_limited_coefficients(ic: &InitialCondition, epsilon: f64, grid: &Grid) -> SpectralField {
    let InitialCondition::BandLimitedGaussian {
        width,
        k_pass,
        k_stop,
        ..
    } = *ic
    else {
        unreachable!("caller matched the variant");
    };
    let (ca, cb) = ic.center_ab();
    let spec = *grid.spec();
    // v = 2^{-1/2} eps exp(-(c^2/3)(d_a^2 + d_a d_b + d_b^2)/w^2), c = 2^{2/3}.
    let c2 = two_two_thirds().powi(2);
    let w2 = width * width;
    let transform_scale = PI * 12f64.sqrt() * w2 / c2;
    let amp = AMPLITUDE_FACTOR * epsilon * transform_scale / spec.area();
    let mut sf = SpectralField::zeros(spec);
    for i in 0..spec.n_a {
        for j in 0..spec.n_b {
            if grid.is_nyquist(i, j) {
                continue;
            }
            let (ka, kb) = (grid.a.k[i], grid.b.k[j]);
            let envelope = (-(w2 / c2) * (ka * ka - ka * kb + kb * kb)).exp()
                * smooth_cutoff(ka, k_pass, k_stop)
                * smooth_cutoff(kb, k_pass, k_stop);
            sf.coeffs[grid.flat(i, j)] = Complex64::from_polar(amp * envelope, -(ka * ca + kb * cb));
        }
    }
    sf
}
