use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;

/// Periodic computational box in the rotated `(x_a, x_b)` coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub n_a: usize,
    pub n_b: usize,
    pub len_a: f64,
    pub len_b: f64,
    #[serde(default = "default_dealias")]
    pub dealias_fraction: f64,
}

fn default_dealias() -> f64 {
    1.0
}

impl GridSpec {
    pub fn new(n_a: usize, n_b: usize, len_a: f64, len_b: f64) -> Self {
        GridSpec {
            n_a,
            n_b,
            len_a,
            len_b,
            dealias_fraction: 1.0,
        }
    }

    pub fn square(n: usize, len: f64) -> Self {
        Self::new(n, n, len, len)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, n) in [("n_a", self.n_a), ("n_b", self.n_b)] {
            if n < 8 || !n.is_power_of_two() {
                return Err(Error::InvalidGrid(format!(
                    "{name} = {n} must be a power of two >= 8"
                )));
            }
        }
        for (name, len) in [("len_a", self.len_a), ("len_b", self.len_b)] {
            if !(len.is_finite() && len > 0.0) {
                return Err(Error::InvalidGrid(format!("{name} = {len} must be positive")));
            }
        }
        if !(self.dealias_fraction > 0.0 && self.dealias_fraction <= 1.0) {
            return Err(Error::InvalidGrid(format!(
                "dealias_fraction = {} must lie in (0, 1]",
                self.dealias_fraction
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n_a * self.n_b
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn area(&self) -> f64 {
        self.len_a * self.len_b
    }

    pub fn cell_measure(&self) -> f64 {
        self.area() / self.len() as f64
    }

    pub fn dx_a(&self) -> f64 {
        self.len_a / self.n_a as f64
    }

    pub fn dx_b(&self) -> f64 {
        self.len_b / self.n_b as f64
    }

    /// Largest resolved wavenumber over both axes.
    pub fn k_max(&self) -> f64 {
        (PI * self.n_a as f64 / self.len_a).max(PI * self.n_b as f64 / self.len_b)
    }

    pub(crate) fn check_same(&self, other: &GridSpec) -> Result<()> {
        if self.n_a == other.n_a
            && self.n_b == other.n_b
            && self.len_a == other.len_a
            && self.len_b == other.len_b
        {
            Ok(())
        } else {
            Err(Error::GridMismatch {
                expected: self.to_string(),
                found: other.to_string(),
            })
        }
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}x{} on [{:.6}, {:.6}]",
            self.n_a, self.n_b, self.len_a, self.len_b
        )
    }
}

/// Signed mode index for FFT-ordered position `j` on an `n`-point axis.
#[inline]
pub fn signed_index(j: usize, n: usize) -> i64 {
    if j < n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

/// Axis tables: signed indices, wavenumbers, and sample coordinates.
#[derive(Clone, Debug)]
pub struct Axis {
    pub n: usize,
    pub len: f64,
    pub index: Vec<i64>,
    /// `2 pi m / len`, with `m` in `[-n/2, n/2)`.
    pub k: Vec<f64>,
    /// Same as `k` but with the Nyquist entry set to zero. Used for symbols
    /// that are odd in `k`, so real fields stay real.
    pub k_odd: Vec<f64>,
    /// Sample positions `-len/2 + j len/n`.
    pub x: Vec<f64>,
}

impl Axis {
    fn new(n: usize, len: f64) -> Self {
        let index: Vec<i64> = (0..n).map(|j| signed_index(j, n)).collect();
        let scale = 2.0 * PI / len;
        let k: Vec<f64> = index.iter().map(|&m| m as f64 * scale).collect();
        let k_odd = index
            .iter()
            .map(|&m| {
                if m == -(n as i64) / 2 {
                    0.0
                } else {
                    m as f64 * scale
                }
            })
            .collect();
        let dx = len / n as f64;
        let x = (0..n).map(|j| -0.5 * len + j as f64 * dx).collect();
        Axis {
            n,
            len,
            index,
            k,
            k_odd,
            x,
        }
    }

    pub fn is_nyquist(&self, j: usize) -> bool {
        j == self.n / 2
    }
}

/// 2D complex FFT over a row-major `n_a x n_b` buffer.
#[derive(Clone)]
pub(crate) struct Fft2 {
    n_a: usize,
    n_b: usize,
    fwd_a: Arc<dyn Fft<f64>>,
    fwd_b: Arc<dyn Fft<f64>>,
    inv_a: Arc<dyn Fft<f64>>,
    inv_b: Arc<dyn Fft<f64>>,
}

impl Fft2 {
    pub(crate) fn new(n_a: usize, n_b: usize) -> Self {
        let mut planner = FftPlanner::<f64>::new();
        Fft2 {
            n_a,
            n_b,
            fwd_a: planner.plan_fft_forward(n_a),
            fwd_b: planner.plan_fft_forward(n_b),
            inv_a: planner.plan_fft_inverse(n_a),
            inv_b: planner.plan_fft_inverse(n_b),
        }
    }

    /// Unnormalized transform in place; `inverse` selects the `e^{+i}` kernel.
    pub(crate) fn process(&self, data: &mut [Complex64], inverse: bool, exec: Execution) {
        debug_assert_eq!(data.len(), self.n_a * self.n_b);
        let (along_b, along_a) = if inverse {
            (&self.inv_b, &self.inv_a)
        } else {
            (&self.fwd_b, &self.fwd_a)
        };
        rows(along_b, data, self.n_b, exec);
        let mut t = transpose(data, self.n_a, self.n_b, exec);
        rows(along_a, &mut t, self.n_a, exec);
        let back = transpose(&t, self.n_b, self.n_a, exec);
        data.copy_from_slice(&back);
    }
}

const ROWS_PER_TASK: usize = 16;

fn rows(fft: &Arc<dyn Fft<f64>>, data: &mut [Complex64], row_len: usize, exec: Execution) {
    exec.for_each_chunk(data, row_len * ROWS_PER_TASK, |_, chunk| {
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        for row in chunk.chunks_exact_mut(row_len) {
            fft.process_with_scratch(row, &mut scratch);
        }
    });
}

/// Transpose of a row-major `rows x cols` buffer.
fn transpose(src: &[Complex64], rows: usize, cols: usize, exec: Execution) -> Vec<Complex64> {
    let mut dst = vec![Complex64::new(0.0, 0.0); rows * cols];
    exec.for_each_chunk(&mut dst, rows, |c, out| {
        for (r, slot) in out.iter_mut().enumerate() {
            *slot = src[r * cols + c];
        }
    });
    dst
}

/// Grid handle: the [`GridSpec`], axis tables and FFT plans for the base and the
/// 2x zero-padded grid.
#[derive(Clone)]
pub struct Grid {
    spec: GridSpec,
    pub a: Axis,
    pub b: Axis,
    exec: Execution,
    pub(crate) fft: Fft2,
    pub(crate) fft_padded: Fft2,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("spec", &self.spec)
            .field("exec", &self.exec)
            .finish()
    }
}

impl Grid {
    pub fn new(spec: GridSpec) -> Result<Self> {
        Self::with_execution(spec, Execution::default())
    }

    pub fn with_execution(spec: GridSpec, exec: Execution) -> Result<Self> {
        spec.validate()?;
        Ok(Grid {
            a: Axis::new(spec.n_a, spec.len_a),
            b: Axis::new(spec.n_b, spec.len_b),
            fft: Fft2::new(spec.n_a, spec.n_b),
            fft_padded: Fft2::new(2 * spec.n_a, 2 * spec.n_b),
            spec,
            exec,
        })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn execution(&self) -> Execution {
        self.exec
    }

    pub fn n_a(&self) -> usize {
        self.spec.n_a
    }

    pub fn n_b(&self) -> usize {
        self.spec.n_b
    }

    #[inline]
    pub fn flat(&self, i: usize, j: usize) -> usize {
        i * self.spec.n_b + j
    }

    /// Mode is on a Nyquist row or column.
    #[inline]
    pub fn is_nyquist(&self, i: usize, j: usize) -> bool {
        self.a.is_nyquist(i) || self.b.is_nyquist(j)
    }

    /// `1 + k_a^2 + k_b^2` at flat index `idx`.
    #[inline]
    pub fn japanese_sq(&self, idx: usize) -> f64 {
        let (i, j) = (idx / self.spec.n_b, idx % self.spec.n_b);
        1.0 + self.a.k[i] * self.a.k[i] + self.b.k[j] * self.b.k[j]
    }

    /// Linear dispersion `k_a^3 + k_b^3` (odd tables).
    #[inline]
    pub fn dispersion(&self, i: usize, j: usize) -> f64 {
        let (ka, kb) = (self.a.k_odd[i], self.b.k_odd[j]);
        ka * ka * ka + kb * kb * kb
    }
}
