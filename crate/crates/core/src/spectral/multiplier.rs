use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::SpectralField;
use super::grid::Grid;
use crate::error::{Error, Result};

/// Fourier multipliers used by the solver and the diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Multiplier {
    /// `e^{i t (k_a^3 + k_b^3)}`: the flow of `d_t v + d_a^3 v + d_b^3 v = 0`.
    LinearSemigroup { t: f64 },
    DerivativeA { order: u8 },
    DerivativeB { order: u8 },
    FractionalAbsA { beta: f64 },
    FractionalAbsB { beta: f64 },
    /// `d_a + d_b`.
    SumDerivative,
    /// `<k>^s = (1 + |k|^2)^{s/2}`.
    SobolevWeight { s: f64 },
}

impl Multiplier {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Multiplier::LinearSemigroup { t } if !t.is_finite() => {
                Err(Error::InvalidMultiplier(format!("semigroup time {t} not finite")))
            }
            Multiplier::DerivativeA { order } | Multiplier::DerivativeB { order }
                if !(1..=3).contains(&order) =>
            {
                Err(Error::InvalidMultiplier(format!(
                    "derivative order {order} outside 1..=3"
                )))
            }
            Multiplier::FractionalAbsA { beta } | Multiplier::FractionalAbsB { beta }
                if !(0.0..=1.0).contains(&beta) =>
            {
                Err(Error::InvalidMultiplier(format!("beta = {beta} outside [0, 1]")))
            }
            Multiplier::SobolevWeight { s } if !(0.0..=3.0).contains(&s) => {
                Err(Error::InvalidMultiplier(format!("s = {s} outside [0, 3]")))
            }
            _ => Ok(()),
        }
    }

    /// Symbol at mode `(i, j)` of `grid`.
    #[inline]
    pub fn symbol(&self, grid: &Grid, i: usize, j: usize) -> Complex64 {
        let (ka, kb) = (grid.a.k[i], grid.b.k[j]);
        let (ka_odd, kb_odd) = (grid.a.k_odd[i], grid.b.k_odd[j]);
        match *self {
            Multiplier::LinearSemigroup { t } => Complex64::from_polar(1.0, t * grid.dispersion(i, j)),
            Multiplier::DerivativeA { order } => derivative(ka, ka_odd, order),
            Multiplier::DerivativeB { order } => derivative(kb, kb_odd, order),
            Multiplier::FractionalAbsA { beta } => Complex64::new(abs_pow(ka, beta), 0.0),
            Multiplier::FractionalAbsB { beta } => Complex64::new(abs_pow(kb, beta), 0.0),
            Multiplier::SumDerivative => Complex64::new(0.0, ka_odd + kb_odd),
            Multiplier::SobolevWeight { s } => {
                Complex64::new((1.0 + ka * ka + kb * kb).powf(0.5 * s), 0.0)
            }
        }
    }
}

fn derivative(k: f64, k_odd: f64, order: u8) -> Complex64 {
    match order {
        1 => Complex64::new(0.0, k_odd),
        2 => Complex64::new(-k * k, 0.0),
        _ => Complex64::new(0.0, -k_odd * k_odd * k_odd),
    }
}

fn abs_pow(k: f64, beta: f64) -> f64 {
    if beta == 0.0 {
        1.0
    } else {
        k.abs().powf(beta)
    }
}

impl Grid {
    pub fn apply_multiplier(&self, sf: &SpectralField, m: Multiplier) -> Result<SpectralField> {
        self.spec().check_same(&sf.grid)?;
        m.validate()?;
        let mut out = sf.clone();
        self.apply_in_place(&mut out.coeffs, m);
        Ok(out)
    }

    pub(crate) fn apply_in_place(&self, coeffs: &mut [Complex64], m: Multiplier) {
        let nb = self.n_b();
        self.execution().for_each_chunk(coeffs, nb, |i, row| {
            for (j, c) in row.iter_mut().enumerate() {
                *c *= m.symbol(self, i, j);
            }
        });
    }
}
