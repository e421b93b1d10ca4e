use serde::{Deserialize, Serialize};

use super::fit::{decay_fit, linear_regression, DecayFit};
use super::norms::NormReport;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linear::ProfileSnapshot;
use crate::solver::{RunConfig, Solver};
use crate::spectral::Grid;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DyadicIncrement {
    pub t1: f64,
    pub t2: f64,
    /// `|| f(t2) - f(t1) ||_{H^2}`
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScatteringReport {
    pub pairs: Vec<DyadicIncrement>,
    pub dtf_fit: DecayFit,
    /// `int_T^inf` of the fitted `|| d_t f ||_{H^2}` law; `None` when the fitted
    /// exponent is `>= -1` (divergent).
    pub extrapolated_tail: Option<f64>,
    pub horizon: f64,
}

impl ScatteringReport {
    /// Whether the increments with `t1 >= t_min` strictly decrease.
    pub fn increments_decreasing_from(&self, t_min: f64) -> bool {
        let d: Vec<f64> = self
            .pairs
            .iter()
            .filter(|p| p.t1 >= t_min * (1.0 - 1e-12))
            .map(|p| p.distance)
            .collect();
        d.windows(2).all(|w| w[1] < w[0])
    }
}

fn is_dyadic(t: f64) -> bool {
    t > 0.0 && (t.log2() - t.log2().round()).abs() < 1e-9
}

/// Dyadic profile increments plus the `d_t f` decay fit over `fit_window`.
pub fn scattering_report(
    grid: &Grid,
    profiles: &[ProfileSnapshot],
    norms: &[NormReport],
    fit_window: (f64, f64),
) -> Result<ScatteringReport> {
    let mut dyadic: Vec<&ProfileSnapshot> = profiles.iter().filter(|p| is_dyadic(p.time)).collect();
    dyadic.sort_by(|a, b| a.time.total_cmp(&b.time));
    dyadic.dedup_by(|a, b| a.time == b.time);
    if dyadic.len() < 4 {
        return Err(Error::TooFewPoints {
            needed: 4,
            got: dyadic.len(),
        });
    }
    let mut pairs = Vec::new();
    for w in dyadic.windows(2) {
        if (w[1].time / w[0].time - 2.0).abs() > 1e-9 {
            continue;
        }
        pairs.push(DyadicIncrement {
            t1: w[0].time,
            t2: w[1].time,
            distance: w[1].hs_distance(w[0], grid, 2.0)?,
        });
    }
    let series: Vec<(f64, f64)> = norms.iter().map(|n| (n.t, n.dtf_h2)).collect();
    let dtf_fit = decay_fit(&series, fit_window)?;
    let horizon = dyadic.last().map(|p| p.time).unwrap_or(0.0);
    let extrapolated_tail = if dtf_fit.exponent < -1.0 {
        let a = dtf_fit.exponent;
        Some(dtf_fit.intercept.exp() * horizon.powf(a + 1.0) / (-a - 1.0))
    } else {
        None
    };
    Ok(ScatteringReport {
        pairs,
        dtf_fit,
        extrapolated_tail,
        horizon,
    })
}

/// Sup over the trajectory of `max(h3, w_a, w_b)`.
pub fn xnorm(norms: &[NormReport]) -> Result<f64> {
    if norms.is_empty() {
        return Err(Error::TooFewPoints { needed: 1, got: 0 });
    }
    Ok(norms
        .iter()
        .fold(0.0f64, |m, n| m.max(n.h3).max(n.w_a).max(n.w_b)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubicScanRow {
    pub epsilon: f64,
    /// `|| f(T) - f(t_start) ||_{H^2}`
    pub delta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubicScan {
    pub horizon: f64,
    pub rows: Vec<CubicScanRow>,
    /// Slope of `log delta` against `log epsilon` over the rows with `epsilon > 0`;
    /// `None` with fewer than two such rows.
    pub slope: Option<f64>,
}

/// Profile change over `[t_start, horizon]` for each amplitude, runs in parallel.
pub fn cubic_amplitude_scan(
    base: &RunConfig,
    epsilons: &[f64],
    horizon: f64,
    exec: Execution,
) -> Result<CubicScan> {
    let rows = exec.map_slice(epsilons, |&epsilon| -> Result<CubicScanRow> {
        let mut cfg = base.clone();
        cfg.epsilon = epsilon;
        cfg.t_end = horizon;
        cfg.output_times.clear();
        let solver = Solver::with_execution(cfg, exec)?;
        let traj = solver.simulate()?;
        let (first, last) = (&traj.points[0].profile, &traj.points[traj.points.len() - 1].profile);
        Ok(CubicScanRow {
            epsilon,
            delta: last.hs_distance(first, solver.grid(), 2.0)?,
        })
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let fit: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.epsilon > 0.0 && r.delta > 0.0)
        .map(|r| (r.epsilon.ln(), r.delta.ln()))
        .collect();
    let slope = (fit.len() >= 2).then(|| {
        let (xs, ys): (Vec<f64>, Vec<f64>) = fit.into_iter().unzip();
        linear_regression(&xs, &ys).0
    });
    Ok(CubicScan {
        horizon,
        rows,
        slope,
    })
}
