use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linear::{hs_norm_coeffs, ProfileSnapshot};
use crate::solver::SimState;
use crate::spectral::window::wrap;
use crate::spectral::{Grid, Multiplier};

/// Every norm tracked along a run, at one time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub t: f64,
    pub l2: f64,
    pub h3: f64,
    pub linf: f64,
    pub linf_grad: f64,
    /// `|| |d_a|^{1/2} v ||_inf`
    pub linf_half_a: f64,
    pub linf_half_b: f64,
    /// `|| x_a f ||_2`
    pub w_a: f64,
    pub w_b: f64,
    /// `|| d_t f ||_{H^2}`
    pub dtf_h2: f64,
    pub boundary_mass: f64,
    /// False once the solution or the profile reaches the border strip.
    pub weighted_reliable: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormOptions {
    /// Origin of the weights `x_a`, `x_b`.
    pub center_ab: (f64, f64),
    /// Whether the cubic term is active (otherwise `d_t f = 0`).
    pub nonlinear: bool,
    pub boundary_mass_threshold: f64,
}

impl Default for NormOptions {
    fn default() -> Self {
        NormOptions {
            center_ab: (0.0, 0.0),
            nonlinear: true,
            boundary_mass_threshold: 1e-6,
        }
    }
}

/// Fraction of `int v^2` in the border strip of width `n/16` cells.
pub fn boundary_mass(grid: &Grid, values: &[f64]) -> f64 {
    let (na, nb) = (grid.n_a(), grid.n_b());
    let (wa, wb) = ((na / 16).max(1), (nb / 16).max(1));
    let (mut edge, mut total) = (0.0, 0.0);
    for i in 0..na {
        let edge_row = i < wa || i >= na - wa;
        for j in 0..nb {
            let v2 = values[i * nb + j] * values[i * nb + j];
            total += v2;
            if edge_row || j < wb || j >= nb - wb {
                edge += v2;
            }
        }
    }
    if total == 0.0 {
        0.0
    } else {
        edge / total
    }
}

/// Max modulus on the 2x refined grid.
fn padded_max(grid: &Grid, coeffs: &[Complex64]) -> f64 {
    grid.inverse_padded(coeffs)
        .iter()
        .fold(0.0f64, |m, c| m.max(c.re.abs()))
}

fn multiplied(grid: &Grid, coeffs: &[Complex64], m: Multiplier) -> Vec<Complex64> {
    let mut out = coeffs.to_vec();
    grid.apply_in_place(&mut out, m);
    out
}

/// Norm report for `state` with profile `profile`.
pub fn norms(
    grid: &Grid,
    state: &SimState,
    profile: &ProfileSnapshot,
    opts: &NormOptions,
) -> Result<NormReport> {
    state.validate()?;
    grid.spec().check_same(&state.spectral.grid)?;
    grid.spec().check_same(&profile.grid)?;
    let c = &state.spectral.coeffs;

    let l2 = hs_norm_coeffs(grid, c, 0.0);
    let h3 = hs_norm_coeffs(grid, c, 3.0);
    let linf = padded_max(grid, c);

    let da = grid.inverse_padded(&multiplied(grid, c, Multiplier::DerivativeA { order: 1 }));
    let db = grid.inverse_padded(&multiplied(grid, c, Multiplier::DerivativeB { order: 1 }));
    let linf_grad = da
        .iter()
        .zip(&db)
        .fold(0.0f64, |m, (x, y)| m.max(x.re.hypot(y.re)));
    let linf_half_a = padded_max(grid, &multiplied(grid, c, Multiplier::FractionalAbsA { beta: 0.5 }));
    let linf_half_b = padded_max(grid, &multiplied(grid, c, Multiplier::FractionalAbsB { beta: 0.5 }));

    let f: Vec<f64> = grid
        .inverse_complex(&profile.coeffs)
        .into_iter()
        .map(|z| z.re)
        .collect();
    let spec = grid.spec();
    let (ca, cb) = opts.center_ab;
    let (mut sa, mut sb) = (0.0, 0.0);
    for (i, &xa) in grid.a.x.iter().enumerate() {
        let ya = wrap(xa - ca, spec.len_a);
        for (j, &xb) in grid.b.x.iter().enumerate() {
            let yb = wrap(xb - cb, spec.len_b);
            let f2 = f[i * spec.n_b + j] * f[i * spec.n_b + j];
            sa += ya * ya * f2;
            sb += yb * yb * f2;
        }
    }
    let cell = spec.cell_measure();
    let w_a = (sa * cell).sqrt();
    let w_b = (sb * cell).sqrt();

    let dtf_h2 = if opts.nonlinear {
        let mask = crate::solver::dealias_mask(grid);
        let n = crate::solver::cubic_term(grid, c, &mask)?;
        hs_norm_coeffs(grid, &n, 2.0)
    } else {
        0.0
    };

    let mass = boundary_mass(grid, &state.field.values);
    let profile_mass = boundary_mass(grid, &f);
    Ok(NormReport {
        t: state.time,
        l2,
        h3,
        linf,
        linf_grad,
        linf_half_a,
        linf_half_b,
        w_a,
        w_b,
        dtf_h2,
        boundary_mass: mass,
        weighted_reliable: mass < opts.boundary_mass_threshold
            && profile_mass < opts.boundary_mass_threshold,
    })
}
