use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least-squares power law `value ~ e^intercept t^exponent`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub exponent: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    pub n_points: usize,
}

impl DecayFit {
    pub fn predict(&self, t: f64) -> f64 {
        (self.intercept + self.exponent * t.ln()).exp()
    }
}

/// Straight-line fit `y = intercept + slope x`, returning `(slope, intercept, r^2)`.
pub fn linear_regression(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let r = y - intercept - slope * x;
            r * r
        })
        .sum();
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    (slope, intercept, r2)
}

/// Fits `log value` against `log t` over the samples with `t` in `window`.
pub fn decay_fit(series: &[(f64, f64)], window: (f64, f64)) -> Result<DecayFit> {
    if !(window.0 > 0.0 && window.1 > window.0) {
        return Err(Error::arg("window", format!("need 0 < t_lo < t_hi, got {window:?}")));
    }
    let pts: Vec<(f64, f64)> = series
        .iter()
        .copied()
        .filter(|&(t, _)| t >= window.0 * (1.0 - 1e-12) && t <= window.1 * (1.0 + 1e-12))
        .collect();
    if pts.len() < 4 {
        return Err(Error::TooFewPoints {
            needed: 4,
            got: pts.len(),
        });
    }
    if let Some(&(time, value)) = pts.iter().find(|&&(_, v)| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::NonPositive { time, value });
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let (exponent, intercept, r_squared) = linear_regression(&xs, &ys);
    Ok(DecayFit {
        exponent,
        intercept,
        r_squared,
        window,
        n_points: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_short_and_nonpositive_series() {
        let s = [(1.0, 1.0), (2.0, 0.5), (4.0, 0.25)];
        assert!(matches!(decay_fit(&s, (1.0, 4.0)), Err(Error::TooFewPoints { .. })));
        let s = [(1.0, 1.0), (2.0, 0.5), (4.0, 0.0), (8.0, 0.1)];
        assert!(matches!(decay_fit(&s, (1.0, 8.0)), Err(Error::NonPositive { .. })));
    }
}
