//! Direct trilinear sum for the Duhamel integrand of the profile equation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linear::ProfileSnapshot;
use crate::spectral::{Grid, GridSpec, Multiplier, SpectralField};

pub const ORACLE_MAX_MODES: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrilinearSymbol {
    /// `i (xi_a + xi_b)`, the symbol of `d_a + d_b`.
    Sum,
    One,
}

/// How the output frequency `rho = xi - eta - sigma` is treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aliasing {
    /// Indices wrap modulo the grid: the plain (aliased) product on the grid.
    Periodic,
    /// Out-of-range `rho` and Nyquist modes dropped: the dealiased product.
    Exact,
}

#[derive(Clone, Debug)]
pub struct TrilinearQuery {
    pub grid: GridSpec,
    pub s: f64,
    pub profile: ProfileSnapshot,
    pub symbol: TrilinearSymbol,
    pub aliasing: Aliasing,
}

impl TrilinearQuery {
    fn check(&self) -> Result<()> {
        self.grid.validate()?;
        let n_modes = self.grid.len();
        if n_modes > ORACLE_MAX_MODES {
            return Err(Error::GridTooLarge { n_modes });
        }
        self.grid.check_same(&self.profile.grid)?;
        if !self.s.is_finite() {
            return Err(Error::arg("s", "not finite"));
        }
        Ok(())
    }
}

fn symbol_at(grid: &Grid, symbol: TrilinearSymbol, i: usize, j: usize) -> Complex64 {
    match symbol {
        TrilinearSymbol::Sum => Multiplier::SumDerivative.symbol(grid, i, j),
        TrilinearSymbol::One => Complex64::new(1.0, 0.0),
    }
}

/// `sum_{eta, sigma} e^{-i s phi} m(xi) f(eta) f(sigma) f(rho)` with
/// `phi = Omega(xi) - Omega(eta) - Omega(sigma) - Omega(rho)`,
/// `Omega = k_a^3 + k_b^3`, by direct summation. With the adopted transform
/// convention this is the `xi` coefficient of `e^{sL} m (e^{-sL} f)^3`.
pub fn duhamel_oracle(q: &TrilinearQuery) -> Result<Vec<Complex64>> {
    q.check()?;
    let grid = Grid::new(q.grid)?;
    let (na, nb) = (grid.n_a(), grid.n_b());
    let f = &q.profile.coeffs;
    let exact = q.aliasing == Aliasing::Exact;
    let omega: Vec<f64> = (0..na * nb).map(|idx| grid.dispersion(idx / nb, idx % nb)).collect();
    let skip = |i: usize, j: usize| exact && grid.is_nyquist(i, j);
    // Signed index -> array index, None when out of range for exact mode.
    let locate = |m: i64, n: usize| -> Option<usize> {
        let half = (n / 2) as i64;
        if exact && !(-half < m && m < half) {
            return None;
        }
        Some(m.rem_euclid(n as i64) as usize)
    };

    let mut out = vec![Complex64::new(0.0, 0.0); na * nb];
    for xi_i in 0..na {
        for xi_j in 0..nb {
            if skip(xi_i, xi_j) {
                continue;
            }
            let xi = xi_i * nb + xi_j;
            let mut acc = Complex64::new(0.0, 0.0);
            for et_i in 0..na {
                for et_j in 0..nb {
                    if skip(et_i, et_j) {
                        continue;
                    }
                    let eta = et_i * nb + et_j;
                    let f_eta = f[eta];
                    for sg_i in 0..na {
                        let ra = grid.a.index[xi_i] - grid.a.index[et_i] - grid.a.index[sg_i];
                        let Some(rh_i) = locate(ra, na) else { continue };
                        for sg_j in 0..nb {
                            if skip(sg_i, sg_j) {
                                continue;
                            }
                            let rb = grid.b.index[xi_j] - grid.b.index[et_j] - grid.b.index[sg_j];
                            let Some(rh_j) = locate(rb, nb) else { continue };
                            if skip(rh_i, rh_j) {
                                continue;
                            }
                            let sigma = sg_i * nb + sg_j;
                            let rho = rh_i * nb + rh_j;
                            let phi = omega[xi] - omega[eta] - omega[sigma] - omega[rho];
                            acc += Complex64::from_polar(1.0, -q.s * phi) * f_eta * f[sigma] * f[rho];
                        }
                    }
                }
            }
            out[xi] = acc * symbol_at(&grid, q.symbol, xi_i, xi_j);
        }
    }
    Ok(out)
}

/// The same quantity through transforms: `E(-s) [m (E(s) f)^3]`, with the cube
/// on the base grid (periodic) or the 2x padded grid (exact).
pub fn trilinear_pseudospectral(q: &TrilinearQuery) -> Result<Vec<Complex64>> {
    q.check()?;
    let grid = Grid::new(q.grid)?;
    let nb = grid.n_b();
    let v = grid.apply_multiplier(&q.profile.as_spectral(), Multiplier::LinearSemigroup { t: q.s })?;
    let cube = |buf: Vec<Complex64>| -> Vec<Complex64> {
        buf.into_iter()
            .map(|c| Complex64::new(c.re * c.re * c.re, 0.0))
            .collect()
    };
    let mut hat = match q.aliasing {
        Aliasing::Periodic => grid.forward_complex(cube(grid.inverse_complex(&v.coeffs))),
        Aliasing::Exact => grid.forward_padded(cube(grid.inverse_padded(&v.coeffs))),
    };
    for (idx, c) in hat.iter_mut().enumerate() {
        *c *= symbol_at(&grid, q.symbol, idx / nb, idx % nb);
    }
    let out = SpectralField {
        grid: q.grid,
        coeffs: hat,
        time: q.s,
    };
    Ok(grid
        .apply_multiplier(&out, Multiplier::LinearSemigroup { t: -q.s })?
        .coeffs)
}

/// `max |a - b| / max |b|` (0 when both vanish).
pub fn max_relative_deviation(a: &[Complex64], b: &[Complex64]) -> f64 {
    let scale = b.iter().fold(0.0f64, |m, c| m.max(c.norm()));
    let diff = a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).norm()));
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}
