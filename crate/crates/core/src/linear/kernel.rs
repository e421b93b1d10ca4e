//! Airy kernels `k_t` (1D) and `K_t = k_t (x) k_t` (2D).

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::airy::ai;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::spectral::window::smooth_cutoff;

/// Closed form `(3t)^{-1/3} Ai(x / (3t)^{1/3})`.
pub fn airy_kernel_closed(t: f64, x: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::arg("t", format!("must be positive, got {t}")));
    }
    let s = (3.0 * t).cbrt();
    Ok(ai(x / s) / s)
}

/// Periodic 1D grid plus smooth frequency truncation for the spectral kernel.
///
/// Resolution rule for evaluating on `|x| <= x_max` at time `t`:
/// * `xi_stop < pi n / len` (truncated symbol lies strictly below Nyquist),
/// * `3 t xi_pass^2 >= 2 x_max` (every stationary point `xi = sqrt(-x/3t)`
///   of the window lies in the untouched pass band),
/// * `len / 2 >= 3 t xi_stop^2 + x_max` (group-velocity front of the
///   retained band stays clear of the periodic image).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelGrid1d {
    pub n: usize,
    pub len: f64,
    pub xi_pass: f64,
    pub xi_stop: f64,
}

impl KernelGrid1d {
    /// Smallest power-of-two grid satisfying the resolution rule with margin.
    pub fn for_time(t: f64, x_max: f64) -> Self {
        let xi_pass = (2.0 * x_max / (3.0 * t)).sqrt().max(6.0 * t.powf(-1.0 / 3.0));
        Self::for_band(t, x_max, xi_pass)
    }

    /// Grid for a prescribed pass band, `xi_stop = 2 xi_pass`.
    pub fn for_band(t: f64, x_max: f64, xi_pass: f64) -> Self {
        let xi_stop = 2.0 * xi_pass;
        let len = 2.2 * (3.0 * t * xi_stop * xi_stop + x_max);
        let n = (1.25 * len * xi_stop / PI).ceil().max(8.0) as usize;
        KernelGrid1d {
            n: n.next_power_of_two(),
            len,
            xi_pass,
            xi_stop,
        }
    }

    pub fn dx(&self) -> f64 {
        self.len / self.n as f64
    }

    pub fn check(&self, t: f64, x_max: f64) -> Result<()> {
        if !self.n.is_power_of_two() || self.n < 8 || !(self.len > 0.0) {
            return Err(Error::Resolution(format!(
                "kernel grid needs n a power of two >= 8 and len > 0, got n = {}, len = {}",
                self.n, self.len
            )));
        }
        if !(0.0 < self.xi_pass && self.xi_pass < self.xi_stop) {
            return Err(Error::Resolution("need 0 < xi_pass < xi_stop".into()));
        }
        let nyquist = PI * self.n as f64 / self.len;
        if self.xi_stop >= nyquist {
            return Err(Error::Resolution(format!(
                "xi_stop = {} reaches the Nyquist wavenumber {nyquist}",
                self.xi_stop
            )));
        }
        if 3.0 * t * self.xi_pass * self.xi_pass < 2.0 * x_max {
            return Err(Error::Resolution(format!(
                "pass band {} misses stationary points of |x| <= {x_max} at t = {t}",
                self.xi_pass
            )));
        }
        if 0.5 * self.len < 3.0 * t * self.xi_stop * self.xi_stop + x_max {
            return Err(Error::Resolution(format!(
                "box length {} too short for t = {t}, x_max = {x_max}",
                self.len
            )));
        }
        Ok(())
    }
}

/// Band-limited 1D kernel `|d|^beta k_t` held by its Fourier coefficients.
#[derive(Clone, Debug)]
pub struct SpectralKernel1d {
    pub t: f64,
    pub beta: f64,
    pub grid: KernelGrid1d,
    /// `(xi_m, c_m)` for the modes inside the truncation support.
    modes: Vec<(f64, Complex64)>,
}

impl SpectralKernel1d {
    pub fn new(t: f64, beta: f64, grid: KernelGrid1d, x_max: f64) -> Result<Self> {
        if !(t > 0.0) {
            return Err(Error::arg("t", format!("must be positive, got {t}")));
        }
        if !(0.0..=1.0).contains(&beta) {
            return Err(Error::arg("beta", format!("must lie in [0, 1], got {beta}")));
        }
        grid.check(t, x_max)?;
        let dxi = 2.0 * PI / grid.len;
        let m_max = (grid.xi_stop / dxi).ceil() as i64;
        let modes = (-m_max..=m_max)
            .filter_map(|m| {
                let xi = m as f64 * dxi;
                let w = smooth_cutoff(xi, grid.xi_pass, grid.xi_stop);
                if w == 0.0 {
                    return None;
                }
                let amp = if beta == 0.0 { w } else { w * xi.abs().powf(beta) };
                let c = Complex64::from_polar(amp / grid.len, t * xi * xi * xi);
                Some((xi, c))
            })
            .collect();
        Ok(SpectralKernel1d {
            t,
            beta,
            grid,
            modes,
        })
    }

    /// Samples on the periodic grid points `x_j = -len/2 + j dx` with `|x_j| <= x_max`.
    pub fn sample(&self, x_max: f64) -> (Vec<f64>, Vec<f64>) {
        let n = self.grid.n;
        let dxi = 2.0 * PI / self.grid.len;
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for &(xi, c) in &self.modes {
            let m = (xi / dxi).round() as i64;
            let sign = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            buf[m.rem_euclid(n as i64) as usize] += c * sign;
        }
        FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
        let dx = self.grid.dx();
        let (mut xs, mut vs) = (Vec::new(), Vec::new());
        for (j, v) in buf.iter().enumerate() {
            let x = -0.5 * self.grid.len + j as f64 * dx;
            if x.abs() <= x_max {
                xs.push(x);
                vs.push(v.re);
            }
        }
        (xs, vs)
    }

    /// Direct evaluation of the trigonometric sum at an arbitrary point.
    pub fn eval(&self, x: f64) -> f64 {
        let Some(&(xi0, _)) = self.modes.first() else {
            return 0.0;
        };
        let dxi = 2.0 * PI / self.grid.len;
        let step = Complex64::from_polar(1.0, dxi * x);
        let mut phasor = Complex64::from_polar(1.0, xi0 * x);
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &(_, c)) in self.modes.iter().enumerate() {
            if i % 64 == 0 {
                phasor = Complex64::from_polar(1.0, (xi0 + i as f64 * dxi) * x);
            }
            acc += c * phasor;
            phasor *= step;
        }
        acc.re
    }
}

/// `k_t` on `|x| <= x_max` via the discrete transform of the truncated symbol.
pub fn airy_kernel_spectral(t: f64, grid: &KernelGrid1d, x_max: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    Ok(SpectralKernel1d::new(t, 0.0, *grid, x_max)?.sample(x_max))
}

/// `|d|^beta k_t` on `|x| <= x_max`.
pub fn fractional_kernel_spectral(
    t: f64,
    beta: f64,
    grid: &KernelGrid1d,
    x_max: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    Ok(SpectralKernel1d::new(t, beta, *grid, x_max)?.sample(x_max))
}

/// Samples of the 2D kernel on a uniform square grid.
#[derive(Clone, Debug)]
pub struct KernelSample {
    pub t: f64,
    pub points: Vec<(f64, f64)>,
    pub values: Vec<Complex64>,
    /// Area represented by each sample.
    pub cell_measure: f64,
}

impl KernelSample {
    /// `K_t = a (x) b` on the tensor grid `xs x xs`.
    fn tensor(t: f64, xs: &[f64], a: &[f64], b: &[f64], cell_measure: f64) -> Self {
        let mut points = Vec::with_capacity(xs.len() * xs.len());
        let mut values = Vec::with_capacity(xs.len() * xs.len());
        for (i, &xa) in xs.iter().enumerate() {
            for (j, &xb) in xs.iter().enumerate() {
                points.push((xa, xb));
                values.push(Complex64::new(a[i] * b[j], 0.0));
            }
        }
        KernelSample {
            t,
            points,
            values,
            cell_measure,
        }
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

fn cell_centers(half_width: f64, n: usize) -> (Vec<f64>, f64) {
    let h = 2.0 * half_width / n as f64;
    ((0..n).map(|i| -half_width + (i as f64 + 0.5) * h).collect(), h)
}

/// Closed-form `K_t` on `n x n` cell centres of `[-half_width, half_width]^2`.
pub fn kernel_sample_closed(t: f64, half_width: f64, n: usize) -> Result<KernelSample> {
    if n == 0 || !(half_width > 0.0) {
        return Err(Error::arg("half_width", "need n > 0 and half_width > 0"));
    }
    let (xs, h) = cell_centers(half_width, n);
    let k = xs
        .iter()
        .map(|&x| airy_kernel_closed(t, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(KernelSample::tensor(t, &xs, &k, &k, h * h))
}

/// Spectral `K_t` on the same cell centres, evaluated from the band-limited sum.
pub fn kernel_sample_spectral(
    t: f64,
    half_width: f64,
    n: usize,
    exec: Execution,
) -> Result<KernelSample> {
    if n == 0 || !(half_width > 0.0) {
        return Err(Error::arg("half_width", "need n > 0 and half_width > 0"));
    }
    let kern = SpectralKernel1d::new(t, 0.0, KernelGrid1d::for_time(t, half_width), half_width)?;
    let (xs, h) = cell_centers(half_width, n);
    let k = exec.map_slice(&xs, |&x| kern.eval(x));
    Ok(KernelSample::tensor(t, &xs, &k, &k, h * h))
}

/// Max deviation between `t^{2/3} K_t(x)` and `K_1(t^{-1/3} x)` over
/// `|x_a|, |x_b| <= y_max t^{1/3}`, relative to `max |K_1|`. Both sides come
/// from spectral kernels; the reference `K_1` is evaluated off-grid from its
/// band-limited sum.
pub fn self_similarity_deviation(ts: &[f64], y_max: f64, exec: Execution) -> Result<f64> {
    let k1 = SpectralKernel1d::new(1.0, 0.0, KernelGrid1d::for_time(1.0, y_max), y_max)?;
    let (_, k1_grid) = k1.sample(y_max);
    let k1_max = k1_grid.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let per_t = exec.map_slice(ts, |&t| -> Result<f64> {
        let x_max = y_max * t.cbrt();
        let kt = SpectralKernel1d::new(t, 0.0, KernelGrid1d::for_time(t, x_max), x_max)?;
        let (xs, vals) = kt.sample(x_max);
        let stride = (xs.len() / 256).max(1);
        let scaled: Vec<(f64, f64)> = xs
            .iter()
            .zip(&vals)
            .step_by(stride)
            .map(|(&x, &v)| (t.cbrt() * v, k1.eval(x / t.cbrt())))
            .collect();
        let mut dev = 0.0f64;
        for &(a, ra) in &scaled {
            for &(b, rb) in &scaled {
                dev = dev.max((a * b - ra * rb).abs());
            }
        }
        Ok(dev)
    });
    let mut worst = 0.0f64;
    for d in per_t {
        worst = worst.max(d?);
    }
    Ok(worst / (k1_max * k1_max))
}

/// One row of the envelope check.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct EnvelopeConstant {
    pub t: f64,
    pub constant: f64,
}

/// 1D factor `max_x |d|^beta k_t(x) t^{(1+beta)/3} <t^{-1/3} x>^{1/4 - beta/2}` over
/// `|x| <= y_max t^{1/3}`.
pub fn envelope_constant_1d(t: f64, beta: f64, y_max: f64) -> Result<f64> {
    let x_max = y_max * t.cbrt();
    let kern = SpectralKernel1d::new(t, beta, KernelGrid1d::for_time(t, x_max), x_max)?;
    let (xs, vs) = kern.sample(x_max);
    let tpow = t.powf((1.0 + beta) / 3.0);
    let expo = 0.25 - 0.5 * beta;
    Ok(xs.iter().zip(&vs).fold(0.0f64, |m, (&x, &v)| {
        let y = x / t.cbrt();
        m.max(v.abs() * tpow * (1.0 + y * y).powf(0.5 * expo))
    }))
}

/// Envelope constant of `|d_a|^{beta_a} |d_b|^{beta_b} K_t` for each `t`. The
/// 2D kernel is a tensor product, so the sup factorizes.
pub fn envelope_check(
    ts: &[f64],
    beta_a: f64,
    beta_b: f64,
    y_max: f64,
    exec: Execution,
) -> Result<Vec<EnvelopeConstant>> {
    for (name, b) in [("beta_a", beta_a), ("beta_b", beta_b)] {
        if !(0.0..=0.5).contains(&b) {
            return Err(Error::arg(name, format!("must lie in [0, 1/2], got {b}")));
        }
    }
    exec.map_slice(ts, |&t| {
        let ca = envelope_constant_1d(t, beta_a, y_max)?;
        let cb = if beta_b == beta_a {
            ca
        } else {
            envelope_constant_1d(t, beta_b, y_max)?
        };
        Ok(EnvelopeConstant {
            t,
            constant: ca * cb,
        })
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_rejects_nonpositive_time() {
        assert!(airy_kernel_closed(0.0, 1.0).is_err());
        assert!(airy_kernel_closed(-1.0, 1.0).is_err());
    }

    #[test]
    fn auto_grid_satisfies_rule() {
        for &t in &[0.5, 1.0, 8.0, 100.0] {
            for &x in &[1.0, 20.0, 80.0] {
                KernelGrid1d::for_time(t, x).check(t, x).unwrap();
            }
        }
    }

    #[test]
    fn rule_violations_detected() {
        let g = KernelGrid1d::for_time(1.0, 20.0);
        assert!(g.check(1.0, 200.0).is_err());
        let coarse = KernelGrid1d { n: 64, ..g };
        assert!(coarse.check(1.0, 20.0).is_err());
    }

    #[test]
    fn direct_sum_matches_fft_sample() {
        let g = KernelGrid1d::for_time(2.0, 10.0);
        let k = SpectralKernel1d::new(2.0, 0.3, g, 10.0).unwrap();
        let (xs, vs) = k.sample(10.0);
        for (x, v) in xs.iter().zip(&vs).step_by(37) {
            assert!((k.eval(*x) - v).abs() < 1e-12);
        }
    }
}
