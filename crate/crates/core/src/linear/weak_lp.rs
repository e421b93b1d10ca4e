//! Weak Lebesgue quasi-norm `sup_lambda lambda^p |{|g| >= lambda}|`.

use serde::Serialize;

use super::kernel::KernelSample;
use crate::error::{Error, Result};

pub const DEFAULT_LAMBDA_POINTS: usize = 400;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeakLpReport {
    pub p: f64,
    pub lambda_grid: Vec<f64>,
    /// `|{|g| >= lambda}|` for each grid value.
    pub measures: Vec<f64>,
    pub quasi_norm: f64,
    pub raw_sup: f64,
}

pub fn weak_lp_norm(sample: &KernelSample, p: f64) -> Result<WeakLpReport> {
    weak_lp_from_magnitudes(&sample.magnitudes(), sample.cell_measure, p, DEFAULT_LAMBDA_POINTS)
}

/// Weak-`L^p` over samples `|g|` each carrying `cell` measure, on a log grid of
/// `n_lambda` levels between the smallest positive and the largest magnitude.
pub fn weak_lp_from_magnitudes(
    magnitudes: &[f64],
    cell: f64,
    p: f64,
    n_lambda: usize,
) -> Result<WeakLpReport> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::arg("p", format!("must be >= 1, got {p}")));
    }
    if !(cell > 0.0) {
        return Err(Error::arg("cell", "must be positive"));
    }
    if n_lambda < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            got: n_lambda,
        });
    }
    if magnitudes.iter().any(|g| !g.is_finite()) {
        return Err(Error::NonFinite("weak-Lp samples"));
    }
    let mut sorted: Vec<f64> = magnitudes.iter().map(|g| g.abs()).filter(|&g| g > 0.0).collect();
    if sorted.is_empty() {
        return Ok(WeakLpReport {
            p,
            lambda_grid: Vec::new(),
            measures: Vec::new(),
            quasi_norm: 0.0,
            raw_sup: 0.0,
        });
    }
    sorted.sort_by(f64::total_cmp);
    let (lo, hi) = (sorted[0], sorted[sorted.len() - 1]);
    let lambda_grid: Vec<f64> = if lo == hi {
        vec![hi]
    } else {
        let (l0, l1) = (lo.ln(), hi.ln());
        (0..n_lambda)
            .map(|i| {
                if i + 1 == n_lambda {
                    hi
                } else {
                    (l0 + (l1 - l0) * i as f64 / (n_lambda - 1) as f64).exp()
                }
            })
            .collect()
    };
    let measures: Vec<f64> = lambda_grid
        .iter()
        .map(|&lam| (sorted.len() - sorted.partition_point(|&g| g < lam)) as f64 * cell)
        .collect();
    let raw_sup = lambda_grid
        .iter()
        .zip(&measures)
        .fold(0.0f64, |m, (&lam, &mu)| m.max(lam.powf(p) * mu));
    Ok(WeakLpReport {
        p,
        lambda_grid,
        measures,
        quasi_norm: raw_sup.powf(1.0 / p),
        raw_sup,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_p() {
        assert!(weak_lp_from_magnitudes(&[1.0], 1.0, 0.5, 400).is_err());
    }

    #[test]
    fn measures_monotone() {
        let g: Vec<f64> = (1..500).map(|i| 1.0 / i as f64).collect();
        let r = weak_lp_from_magnitudes(&g, 0.1, 2.0, 400).unwrap();
        assert!(r.measures.windows(2).all(|w| w[1] <= w[0]));
        assert!((r.quasi_norm - r.raw_sup.sqrt()).abs() < 1e-15);
    }
}
