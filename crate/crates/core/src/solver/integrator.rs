use std::sync::{Arc, Mutex};

use num_complex::Complex64;

use super::config::RunConfig;
use super::rhs::{cubic_term, dealias_mask};
use crate::diagnostics::{boundary_mass, norms, NormOptions, NormReport};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linear::ProfileSnapshot;
use crate::spectral::{evaluate_ic, Field, Frame, Grid, SpectralField};

/// Solution `v(t)` in the `ab` frame. `field` is kept in sync with `spectral`.
#[derive(Clone, Debug)]
pub struct SimState {
    pub spectral: SpectralField,
    pub field: Field,
    pub time: f64,
    pub step_count: u64,
    pub config_hash: String,
}

impl SimState {
    pub fn from_spectral(grid: &Grid, spectral: SpectralField, step_count: u64, config_hash: &str) -> Result<Self> {
        if !spectral.is_finite() {
            return Err(Error::NonFinite("state coefficients"));
        }
        let mut field = grid.inverse(&spectral)?;
        field.time = spectral.time;
        Ok(SimState {
            time: spectral.time,
            spectral,
            field,
            step_count,
            config_hash: config_hash.to_string(),
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.field.frame != Frame::Ab {
            return Err(Error::FrameMismatch { expected: "ab" });
        }
        self.field.validate()?;
        if !self.spectral.is_finite() {
            return Err(Error::NonFinite("state coefficients"));
        }
        Ok(())
    }
}

/// One recorded output time.
#[derive(Clone, Debug)]
pub struct TrajectoryPoint {
    pub state: SimState,
    pub profile: ProfileSnapshot,
    pub norms: NormReport,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub config_hash: String,
    pub points: Vec<TrajectoryPoint>,
    pub steps: u64,
}

impl Trajectory {
    pub fn norms(&self) -> Vec<NormReport> {
        self.points.iter().map(|p| p.norms.clone()).collect()
    }

    pub fn profiles(&self) -> Vec<ProfileSnapshot> {
        self.points.iter().map(|p| p.profile.clone()).collect()
    }
}

const SEMIGROUP_CACHE: usize = 6;

/// Integrating-factor RK4 solver for
/// `d_t v + d_a^3 v + d_b^3 v + (d_a + d_b)(v^3) = 0`.
pub struct Solver {
    grid: Grid,
    config: RunConfig,
    hash: String,
    mask: Vec<bool>,
    cache: Mutex<Vec<(u64, Arc<Vec<Complex64>>)>>,
}

impl Solver {
    pub fn new(config: RunConfig) -> Result<Self> {
        Self::with_execution(config, Execution::default())
    }

    pub fn with_execution(config: RunConfig, exec: Execution) -> Result<Self> {
        config.validate()?;
        let grid = Grid::with_execution(config.grid, exec)?;
        let mask = dealias_mask(&grid);
        Ok(Solver {
            hash: config.config_hash(),
            grid,
            config,
            mask,
            cache: Mutex::new(Vec::new()),
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn config(&self) -> &RunConfig {
        &self.config
    }

    pub fn config_hash(&self) -> &str {
        &self.hash
    }

    /// Initial data sampled in the `ab` frame at `t_start`.
    pub fn initial_state(&self) -> Result<SimState> {
        let mut field = evaluate_ic(&self.config.ic, self.config.epsilon, &self.grid, Frame::Ab)?;
        field.time = self.config.t_start;
        let mut sf = self.grid.forward(&field)?;
        sf.time = self.config.t_start;
        SimState::from_spectral(&self.grid, sf, 0, &self.hash)
    }

    pub fn state_from_spectral(&self, sf: SpectralField) -> Result<SimState> {
        self.grid.spec().check_same(&sf.grid)?;
        SimState::from_spectral(&self.grid, sf, 0, &self.hash)
    }

    /// Dealiased `-(d_a + d_b)(v^3)`; zero when the run is linear-only.
    pub fn nonlinear_rhs(&self, state: &SimState) -> Result<SpectralField> {
        state.validate()?;
        let coeffs = self.rhs(&state.spectral.coeffs)?;
        Ok(SpectralField {
            grid: *self.grid.spec(),
            coeffs,
            time: state.time,
        })
    }

    fn rhs(&self, coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
        if self.config.linear_only {
            return Ok(vec![Complex64::new(0.0, 0.0); coeffs.len()]);
        }
        cubic_term(&self.grid, coeffs, &self.mask)
    }

    fn semigroup(&self, tau: f64) -> Arc<Vec<Complex64>> {
        let key = tau.to_bits();
        let mut cache = self.cache.lock().expect("semigroup cache poisoned");
        if let Some((_, table)) = cache.iter().find(|(k, _)| *k == key) {
            return Arc::clone(table);
        }
        let nb = self.grid.n_b();
        let table: Vec<Complex64> = self.grid.execution().map(self.grid.spec().len(), |idx| {
            Complex64::from_polar(1.0, tau * self.grid.dispersion(idx / nb, idx % nb))
        });
        let table = Arc::new(table);
        if cache.len() == SEMIGROUP_CACHE {
            cache.remove(0);
        }
        cache.push((key, Arc::clone(&table)));
        table
    }

    /// Largest admissible step from `state`:
    /// `min(dt_max, cfl_safety / (|v|_inf^2 k_max))`.
    pub fn step_limit(&self, state: &SimState) -> f64 {
        let vmax = state.field.max_abs();
        let freq = vmax * vmax * self.grid.spec().k_max();
        if self.config.linear_only || freq == 0.0 {
            self.config.dt_max
        } else {
            self.config.dt_max.min(self.config.cfl_safety / freq)
        }
    }

    /// One IF-RK4 (Lawson) step of size `h`.
    pub fn step(&self, state: &SimState, h: f64) -> Result<SimState> {
        state.validate()?;
        let limit = self.step_limit(state);
        if !(h > 0.0) || h > limit * (1.0 + 1e-12) {
            return Err(Error::StepSize { h, limit });
        }
        let coeffs = self.advance(&state.spectral.coeffs, h)?;
        let spectral = SpectralField {
            grid: *self.grid.spec(),
            coeffs,
            time: state.time + h,
        };
        SimState::from_spectral(&self.grid, spectral, state.step_count + 1, &self.hash)
    }

    fn advance(&self, v: &[Complex64], h: f64) -> Result<Vec<Complex64>> {
        let e1 = self.semigroup(h);
        if self.config.linear_only {
            return Ok(v.iter().zip(e1.iter()).map(|(c, e)| c * e).collect());
        }
        let eh = self.semigroup(0.5 * h);
        let hh = 0.5 * h;
        let n = v.len();

        let k1 = self.rhs(v)?;
        let vh: Vec<Complex64> = (0..n).map(|i| eh[i] * v[i]).collect();
        let s2: Vec<Complex64> = (0..n).map(|i| eh[i] * (v[i] + hh * k1[i])).collect();
        let k2 = self.rhs(&s2)?;
        let s3: Vec<Complex64> = (0..n).map(|i| vh[i] + hh * k2[i]).collect();
        let k3 = self.rhs(&s3)?;
        let s4: Vec<Complex64> = (0..n).map(|i| e1[i] * v[i] + h * eh[i] * k3[i]).collect();
        let k4 = self.rhs(&s4)?;
        let sixth = h / 6.0;
        Ok((0..n)
            .map(|i| {
                e1[i] * v[i] + sixth * (e1[i] * k1[i] + 2.0 * eh[i] * (k2[i] + k3[i]) + k4[i])
            })
            .collect())
    }

    fn norm_options(&self) -> NormOptions {
        NormOptions {
            center_ab: self.config.ic.center_ab(),
            nonlinear: !self.config.linear_only,
            boundary_mass_threshold: self.config.boundary_mass_threshold,
        }
    }

    /// Diagnostics for a state of this run.
    pub fn record(&self, state: &SimState) -> Result<TrajectoryPoint> {
        let profile = ProfileSnapshot::from_spectral(&self.grid, &state.spectral)?;
        let norms = norms(&self.grid, state, &profile, &self.norm_options())?;
        Ok(TrajectoryPoint {
            state: state.clone(),
            profile,
            norms,
        })
    }

    /// Runs to `t_end`, recording `t_start` and every output time.
    pub fn simulate(&self) -> Result<Trajectory> {
        let mut points = Vec::new();
        let steps = self.simulate_with(|p| {
            points.push(p);
            Ok(())
        })?;
        Ok(Trajectory {
            config_hash: self.hash.clone(),
            points,
            steps,
        })
    }

    /// Like [`Solver::simulate`] but hands each recorded point to `sink`
    /// instead of keeping it. Returns the number of steps taken.
    pub fn simulate_with<F>(&self, mut sink: F) -> Result<u64>
    where
        F: FnMut(TrajectoryPoint) -> Result<()>,
    {
        let cfg = &self.config;
        let mut state = self.initial_state()?;
        let first = self.record(&state)?;
        let l2_0 = first.norms.l2;
        let linf_0 = first.norms.linf;
        let h3_0 = first.norms.h3;
        sink(first)?;

        let mut targets: Vec<f64> = cfg
            .output_times
            .iter()
            .copied()
            .filter(|&t| t > cfg.t_start)
            .collect();
        if targets.last().map_or(true, |&t| t < cfg.t_end) {
            targets.push(cfg.t_end);
        }

        for &target in &targets {
            while state.time < target {
                let remaining = target - state.time;
                let limit = self.step_limit(&state);
                let (h, lands) = if remaining <= limit * (1.0 + 1e-12) {
                    (remaining.min(limit), true)
                } else if remaining < 2.0 * limit {
                    (0.5 * remaining, false)
                } else {
                    (limit, false)
                };
                let mut next = self.step(&state, h)?;
                if lands {
                    next.time = target;
                    next.spectral.time = target;
                    next.field.time = target;
                }
                state = next;
                self.guard(&state, l2_0, linf_0)?;
            }
            let point = self.record(&state)?;
            check_growth(state.time, "H3 norm", point.norms.h3, h3_0)?;
            sink(point)?;
        }
        Ok(state.step_count)
    }

    fn guard(&self, state: &SimState, l2_0: f64, linf_0: f64) -> Result<()> {
        let mass = boundary_mass(&self.grid, &state.field.values);
        if mass > self.config.boundary_mass_threshold {
            return Err(Error::Wraparound {
                time: state.time,
                mass,
                threshold: self.config.boundary_mass_threshold,
            });
        }
        check_growth(state.time, "L2 norm", state.spectral.l2_norm(), l2_0)?;
        check_growth(state.time, "Linf norm", state.field.max_abs(), linf_0)
    }
}

fn check_growth(time: f64, quantity: &'static str, value: f64, initial: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::NonFinite(quantity));
    }
    if value > 1e3 * initial && value > 0.0 {
        return Err(Error::BlowUp {
            time,
            quantity,
            value,
            initial,
        });
    }
    Ok(())
}
