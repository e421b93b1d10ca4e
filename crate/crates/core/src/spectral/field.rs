use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{Grid, GridSpec};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    /// Original `(x, y)` coordinates (the field is `u`).
    Xy,
    /// Rotated `(x_a, x_b)` coordinates (the field is `v`).
    Ab,
}

impl Frame {
    pub fn code(self) -> u8 {
        match self {
            Frame::Xy => 0,
            Frame::Ab => 1,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(Frame::Xy),
            1 => Some(Frame::Ab),
            _ => None,
        }
    }
}

/// Real field sampled at the grid points, row-major with `x_a` as the slow
/// index.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    pub grid: GridSpec,
    pub values: Vec<f64>,
    pub time: f64,
    pub frame: Frame,
}

impl Field {
    pub fn zeros(grid: GridSpec, frame: Frame) -> Self {
        Field {
            values: vec![0.0; grid.len()],
            grid,
            time: 0.0,
            frame,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.len() != self.grid.len() {
            return Err(Error::InvalidGrid(format!(
                "field has {} samples, grid needs {}",
                self.values.len(),
                self.grid.len()
            )));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("field samples"));
        }
        Ok(())
    }

    pub fn l2_norm(&self) -> f64 {
        (self.grid.cell_measure() * self.values.iter().map(|v| v * v).sum::<f64>()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Fourier coefficients `c(k)` with `v(x) = sum_k c(k) e^{i k.x}`, stored in
/// FFT order.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    pub grid: GridSpec,
    pub coeffs: Vec<Complex64>,
    pub time: f64,
}

impl SpectralField {
    pub fn zeros(grid: GridSpec) -> Self {
        SpectralField {
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
            grid,
            time: 0.0,
        }
    }

    /// Normalized l2 norm, equal to the physical L2 norm by Plancherel.
    pub fn l2_norm(&self) -> f64 {
        (self.grid.area() * self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Largest `|c(-k) - conj c(k)|` relative to the largest coefficient.
    pub fn hermitian_defect(&self) -> f64 {
        let (na, nb) = (self.grid.n_a, self.grid.n_b);
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for i in 0..na {
            let mi = (na - i) % na;
            for j in 0..nb {
                let mj = (nb - j) % nb;
                let d = self.coeffs[mi * nb + mj] - self.coeffs[i * nb + j].conj();
                worst = worst.max(d.norm());
            }
        }
        worst / scale
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn sub(&self, other: &SpectralField) -> SpectralField {
        SpectralField {
            grid: self.grid,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
            time: self.time,
        }
    }
}

#[inline]
fn checker(i: usize, j: usize) -> f64 {
    if (i + j) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl Grid {
    /// Physical samples to Fourier coefficients. Requires the `ab` frame.
    pub fn forward(&self, field: &Field) -> Result<SpectralField> {
        if field.frame != Frame::Ab {
            return Err(Error::FrameMismatch { expected: "ab" });
        }
        self.spec().check_same(&field.grid)?;
        field.validate()?;
        let buf: Vec<Complex64> = field
            .values
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        Ok(SpectralField {
            grid: *self.spec(),
            coeffs: self.forward_complex(buf),
            time: field.time,
        })
    }

    /// Fourier coefficients to physical samples (real part).
    pub fn inverse(&self, sf: &SpectralField) -> Result<Field> {
        self.spec().check_same(&sf.grid)?;
        let values = self
            .inverse_complex(&sf.coeffs)
            .into_iter()
            .map(|c| c.re)
            .collect();
        Ok(Field {
            grid: *self.spec(),
            values,
            time: sf.time,
            frame: Frame::Ab,
        })
    }

    pub(crate) fn forward_complex(&self, mut buf: Vec<Complex64>) -> Vec<Complex64> {
        let (na, nb) = (self.n_a(), self.n_b());
        self.fft.process(&mut buf, false, self.execution());
        let norm = 1.0 / (na * nb) as f64;
        for i in 0..na {
            for j in 0..nb {
                buf[i * nb + j] *= checker(i, j) * norm;
            }
        }
        buf
    }

    pub(crate) fn inverse_complex(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let (na, nb) = (self.n_a(), self.n_b());
        let mut buf = coeffs.to_vec();
        for i in 0..na {
            for j in 0..nb {
                buf[i * nb + j] *= checker(i, j);
            }
        }
        self.fft.process(&mut buf, true, self.execution());
        buf
    }

    /// Samples on the 2x refined grid by trigonometric interpolation.
    /// Nyquist modes are dropped.
    pub(crate) fn inverse_padded(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let (na, nb) = (self.n_a(), self.n_b());
        let (pa, pb) = (2 * na, 2 * nb);
        let mut buf = vec![Complex64::new(0.0, 0.0); pa * pb];
        for i in 0..na {
            if self.a.is_nyquist(i) {
                continue;
            }
            let ma = self.a.index[i];
            let ip = ma.rem_euclid(pa as i64) as usize;
            for j in 0..nb {
                if self.b.is_nyquist(j) {
                    continue;
                }
                let mb = self.b.index[j];
                let jp = mb.rem_euclid(pb as i64) as usize;
                let s = if (ma + mb).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                buf[ip * pb + jp] = coeffs[i * nb + j] * s;
            }
        }
        self.fft_padded.process(&mut buf, true, self.execution());
        buf
    }

    /// Inverse of [`Grid::inverse_padded`]: projects refined-grid samples
    /// onto the base modes, Nyquist excluded.
    pub(crate) fn forward_padded(&self, mut buf: Vec<Complex64>) -> Vec<Complex64> {
        let (na, nb) = (self.n_a(), self.n_b());
        let (pa, pb) = (2 * na, 2 * nb);
        self.fft_padded.process(&mut buf, false, self.execution());
        let norm = 1.0 / (pa * pb) as f64;
        let mut out = vec![Complex64::new(0.0, 0.0); na * nb];
        for i in 0..na {
            if self.a.is_nyquist(i) {
                continue;
            }
            let ma = self.a.index[i];
            let ip = ma.rem_euclid(pa as i64) as usize;
            for j in 0..nb {
                if self.b.is_nyquist(j) {
                    continue;
                }
                let mb = self.b.index[j];
                let jp = mb.rem_euclid(pb as i64) as usize;
                let s = if (ma + mb).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                out[i * nb + j] = buf[ip * pb + jp] * (s * norm);
            }
        }
        out
    }
}
