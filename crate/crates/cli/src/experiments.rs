//! The computations behind each preset. Every function writes its outputs into
//! the run directory and returns named metrics.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use mzk_core::diagnostics::{cubic_amplitude_scan, decay_fit, scattering_report, NormReport};
use mzk_core::linear::{
    ai, ai_contour, airy_kernel_closed, airy_kernel_spectral, envelope_check,
    kernel_sample_spectral, propagate_linear, weak_lp_from_magnitudes, KernelGrid1d,
    ProfileSnapshot,
};
use mzk_core::resonance::{
    cutoff_scaling, gradient_fd_check, identity_check, resonance_scan, SymbolGrid, DEFAULT_TOL,
};
use mzk_core::solver::{
    duhamel_oracle, max_relative_deviation, nonlinear_rhs, trilinear_pseudospectral, Aliasing,
    RunConfig, Solver, TrilinearQuery, TrilinearSymbol,
};
use mzk_core::spectral::ic::InitialCondition;
use mzk_core::spectral::{Field, Frame, Grid, GridSpec, SpectralField};
use mzk_core::Execution;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::output::RunDir;

pub type Metrics = BTreeMap<String, f64>;

pub struct Outcome {
    pub metrics: Metrics,
    pub config: serde_json::Value,
    pub config_hash: String,
}

impl Outcome {
    fn new(config: serde_json::Value, metrics: Metrics) -> Self {
        let hash = Sha256::digest(config.to_string().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        Outcome {
            metrics,
            config,
            config_hash: hash,
        }
    }

    fn from_run(cfg: &RunConfig, extra: serde_json::Value, metrics: Metrics) -> Self {
        Outcome {
            metrics,
            config: json!({ "run": cfg, "extra": extra }),
            config_hash: cfg.config_hash(),
        }
    }
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// Real field of independent uniform samples in `[-1, 1]`, Nyquist modes removed.
pub fn random_field(grid: &Grid, rng: &mut ChaCha8Rng) -> Result<SpectralField> {
    let mut field = Field::zeros(*grid.spec(), Frame::Ab);
    field
        .values
        .iter_mut()
        .for_each(|v| *v = rng.gen_range(-1.0..1.0));
    let mut sf = grid.forward(&field)?;
    for i in 0..grid.n_a() {
        for j in 0..grid.n_b() {
            if grid.is_nyquist(i, j) {
                sf.coeffs[grid.flat(i, j)] = Complex64::new(0.0, 0.0);
            }
        }
    }
    Ok(sf)
}

/// Band-limited bump used by the nonlinear runs, offset by `0.3 len` along
/// `x_a` and `x_b` so the dispersive tail (which travels towards negative
/// `x_a`, `x_b`) stays inside the box.
pub fn offset_bump(spec: &GridSpec, width: f64) -> InitialCondition {
    let c = 0.3 * spec.len_a;
    let (x, y) = mzk_core::spectral::coords::ab_to_xy(c, c);
    InitialCondition::BandLimitedGaussian {
        width,
        k_pass: 1.0,
        k_stop: 1.6,
        center: [x, y],
    }
}

#[derive(Serialize)]
struct UnitarityRow {
    step: usize,
    t: f64,
    l2: f64,
    relative_drift: f64,
}

pub fn linear_unitarity(dir: &mut RunDir, seed: u64, exec: Execution) -> Result<Outcome> {
    let (n, steps, dt) = (256, 1000, 0.1);
    let spec = GridSpec::square(n, 64.0 * PI);
    let grid = Grid::with_execution(spec, exec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sf = random_field(&grid, &mut rng)?;
    let l2_0 = sf.l2_norm();
    let mut drift = 0.0f64;
    let mut rows = vec![UnitarityRow {
        step: 0,
        t: 0.0,
        l2: l2_0,
        relative_drift: 0.0,
    }];
    for step in 1..=steps {
        sf = propagate_linear(&grid, &sf, dt)?;
        let l2 = sf.l2_norm();
        let d = (l2 - l2_0).abs() / l2_0;
        drift = drift.max(d);
        if step % 100 == 0 {
            rows.push(UnitarityRow {
                step,
                t: sf.time,
                l2,
                relative_drift: d,
            });
        }
    }
    dir.write_csv("unitarity.csv", &rows)?;
    let metrics = Metrics::from([("l2_relative_drift".into(), drift)]);
    Ok(Outcome::new(
        json!({ "grid": spec, "steps": steps, "dt": dt, "seed": seed }),
        metrics,
    ))
}

#[derive(Serialize)]
struct AiryRow {
    t: f64,
    x_max: f64,
    n: usize,
    len: f64,
    xi_pass: f64,
    xi_stop: f64,
    max_abs_error: f64,
}

pub fn airy_crosscheck(dir: &mut RunDir, ts: &[f64], x_max: f64) -> Result<Outcome> {
    let mut metrics = Metrics::new();
    let mut rows = Vec::new();
    for &t in ts {
        let g = KernelGrid1d::for_time(t, x_max);
        let (xs, ks) = airy_kernel_spectral(t, &g, x_max)?;
        let mut err = 0.0f64;
        for (x, k) in xs.iter().zip(&ks) {
            err = err.max((k - airy_kernel_closed(t, *x)?).abs());
        }
        metrics.insert(format!("max_abs_error_t{t}"), err);
        rows.push(AiryRow {
            t,
            x_max,
            n: g.n,
            len: g.len,
            xi_pass: g.xi_pass,
            xi_stop: g.xi_stop,
            max_abs_error: err,
        });
    }
    let ai0 = ai(0.0);
    metrics.insert("ai0".into(), ai0);
    metrics.insert("ai0_vs_contour".into(), (ai0 - ai_contour(0.0)).abs());
    metrics.insert("ai0_vs_reference".into(), (ai0 - 0.355_028_053_9).abs());
    metrics.insert(
        "kernel_t_third_vs_ai0".into(),
        (airy_kernel_closed(1.0 / 3.0, 0.0)? - ai0).abs(),
    );
    dir.write_csv("airy.csv", &rows)?;
    Ok(Outcome::new(json!({ "t": ts, "x_max": x_max }), metrics))
}

#[derive(Serialize)]
struct EnvelopeRow {
    t: f64,
    beta_a: f64,
    beta_b: f64,
    constant: f64,
}

/// Sup of `|k_1(y)| <y>^{1/4}` over `|y| <= y_max` from closed-form samples at
/// spacing `h`.
fn dense_envelope_1d(y_max: f64, h: f64) -> Result<f64> {
    let n = (y_max / h).round() as i64;
    let mut best = 0.0f64;
    for j in -n..=n {
        let y = j as f64 * h;
        best = best.max(airy_kernel_closed(1.0, y)?.abs() * (1.0 + y * y).powf(0.125));
    }
    Ok(best)
}

pub fn kernel_envelope(dir: &mut RunDir, exec: Execution) -> Result<Outcome> {
    let ts = [1.0, 10.0, 100.0];
    let y_max = 10.0;
    let mut metrics = Metrics::new();
    metrics.insert(
        "self_similarity_deviation".into(),
        mzk_core::linear::self_similarity_deviation(&ts, 5.0, exec)?,
    );
    let mut rows = Vec::new();
    for (label, beta) in [("beta0", 0.0), ("beta045", 0.45)] {
        let env = envelope_check(&ts, beta, beta, y_max, exec)?;
        let (lo, hi) = env
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(l, h), e| (l.min(e.constant), h.max(e.constant)));
        metrics.insert(format!("envelope_{label}_constant"), env[0].constant);
        metrics.insert(format!("envelope_{label}_spread"), hi / lo - 1.0);
        metrics.insert(
            format!("envelope_{label}_finite"),
            flag(env.iter().all(|e| e.constant.is_finite() && e.constant > 0.0)),
        );
        rows.extend(env.iter().map(|e| EnvelopeRow {
            t: e.t,
            beta_a: beta,
            beta_b: beta,
            constant: e.constant,
        }));
    }
    let dense = dense_envelope_1d(y_max, 1e-3)?.powi(2);
    metrics.insert("envelope_beta0_dense".into(), dense);
    metrics.insert(
        "envelope_beta0_vs_dense".into(),
        (metrics["envelope_beta0_constant"] / dense - 1.0).abs(),
    );
    dir.write_csv("envelope.csv", &rows)?;
    Ok(Outcome::new(
        json!({ "t": ts, "y_max": y_max, "self_similarity_y_max": 5.0, "beta": [0.0, 0.45] }),
        metrics,
    ))
}

#[derive(Serialize)]
struct WeakLpRow {
    t: f64,
    p: f64,
    quasi_norm: f64,
    predicted_ratio: f64,
    measured_ratio: f64,
    deviation: f64,
}

pub fn kernel_weaklp(dir: &mut RunDir, ps: &[f64], ts: &[f64], exec: Execution) -> Result<Outcome> {
    let (half_width, n) = (16.0, 400);
    let samples = ts
        .iter()
        .map(|&t| kernel_sample_spectral(t, half_width * t.cbrt(), n, exec))
        .collect::<mzk_core::Result<Vec<_>>>()?;
    let mut metrics = Metrics::new();
    let mut rows = Vec::new();
    for &p in ps {
        let predicted = -2.0 / 3.0 + 2.0 / (3.0 * p);
        let mut qs = Vec::new();
        for s in &samples {
            let mags = s.magnitudes();
            let q = weak_lp_from_magnitudes(&mags, s.cell_measure, p, 400)?.quasi_norm;
            let q2 = weak_lp_from_magnitudes(&mags, s.cell_measure, p, 800)?.quasi_norm;
            let change = (q2 / q - 1.0).abs();
            let key = format!("lambda_refinement_p{p}");
            let prev = metrics.get(&key).copied().unwrap_or(0.0);
            metrics.insert(key, prev.max(change));
            qs.push(q);
        }
        for (&t, &q) in ts.iter().zip(&qs) {
            let predicted_ratio = (t / ts[0]).powf(predicted);
            let measured_ratio = q / qs[0];
            rows.push(WeakLpRow {
                t,
                p,
                quasi_norm: q,
                predicted_ratio,
                measured_ratio,
                deviation: measured_ratio / predicted_ratio - 1.0,
            });
        }
        let xs: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
        let ys: Vec<f64> = qs.iter().map(|q| q.ln()).collect();
        let (slope, _, _) = mzk_core::diagnostics::linear_regression(&xs, &ys);
        metrics.insert(format!("exponent_p{p}"), slope);
        metrics.insert(format!("exponent_deviation_p{p}"), (slope - predicted).abs());
    }
    dir.write_csv("weaklp.csv", &rows)?;
    Ok(Outcome::new(
        json!({ "p": ps, "t": ts, "half_width": half_width, "samples_per_axis": n, "lambda_points": 400 }),
        metrics,
    ))
}

#[derive(Serialize)]
struct DuhamelRow {
    profile: usize,
    rhs_vs_oracle: f64,
    exact_s: f64,
    periodic_s: f64,
}

pub fn duhamel_check(dir: Option<&mut RunDir>, n_profiles: usize, n: usize, s: f64, seed: u64) -> Result<Outcome> {
    let spec = GridSpec::square(n, 2.0 * PI);
    let grid = Grid::new(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for k in 0..n_profiles {
        let f = random_field(&grid, &mut rng)?;
        let profile = ProfileSnapshot {
            grid: spec,
            time: 0.0,
            coeffs: f.coeffs.clone(),
        };
        let query = |s: f64, aliasing| TrilinearQuery {
            grid: spec,
            s,
            profile: profile.clone(),
            symbol: TrilinearSymbol::Sum,
            aliasing,
        };
        let rhs = nonlinear_rhs(&grid, &f)?;
        let oracle0: Vec<Complex64> = duhamel_oracle(&query(0.0, Aliasing::Exact))?
            .into_iter()
            .map(|c| -c)
            .collect();
        let exact = query(s, Aliasing::Exact);
        let periodic = query(s, Aliasing::Periodic);
        rows.push(DuhamelRow {
            profile: k,
            rhs_vs_oracle: max_relative_deviation(&rhs.coeffs, &oracle0),
            exact_s: max_relative_deviation(&trilinear_pseudospectral(&exact)?, &duhamel_oracle(&exact)?),
            periodic_s: max_relative_deviation(
                &trilinear_pseudospectral(&periodic)?,
                &duhamel_oracle(&periodic)?,
            ),
        });
    }
    let max = |g: fn(&DuhamelRow) -> f64| rows.iter().map(g).fold(0.0f64, f64::max);
    let metrics = Metrics::from([
        ("max_dev_rhs_vs_oracle".into(), max(|r| r.rhs_vs_oracle)),
        ("max_dev_exact".into(), max(|r| r.exact_s)),
        ("max_dev_periodic".into(), max(|r| r.periodic_s)),
    ]);
    if let Some(dir) = dir {
        dir.write_csv("duhamel.csv", &rows)?;
    }
    Ok(Outcome::new(
        json!({ "grid": spec, "profiles": n_profiles, "s": s, "seed": seed }),
        metrics,
    ))
}

pub fn l2_conservation(dir: &mut RunDir, exec: Execution) -> Result<Outcome> {
    let spec = GridSpec::square(256, 128.0 * PI);
    let ic = InitialCondition::BandLimitedGaussian {
        width: 2.0,
        k_pass: 1.0,
        k_stop: 1.6,
        center: [0.0, 0.0],
    };
    let mut cfg = RunConfig::new(spec, ic, 0.1, 10.0);
    cfg.output_times = (2..=10).map(f64::from).collect();
    let solver = Solver::with_execution(cfg.clone(), exec)?;
    let traj = solver.simulate()?;
    let norms = traj.norms();
    let l2_0 = norms[0].l2;
    let drift = norms
        .iter()
        .map(|r| (r.l2 - l2_0).abs() / l2_0)
        .fold(0.0f64, f64::max);
    dir.write_csv("norms.csv", &norms)?;
    dir.write_snapshot(&traj.points[0].state.field)?;
    dir.write_snapshot(&traj.points[traj.points.len() - 1].state.field)?;
    let metrics = Metrics::from([
        ("l2_relative_drift".into(), drift),
        ("steps".into(), traj.steps as f64),
    ]);
    Ok(Outcome::from_run(&cfg, json!({}), metrics))
}

/// Output times: four per octave on `[1, t_end]`, which includes every power of two.
pub fn log_output_times(t_end: f64) -> Vec<f64> {
    let octaves = t_end.log2().round() as i32;
    (1..=4 * octaves).map(|k| 2f64.powf(f64::from(k) / 4.0)).collect()
}

fn is_power_of_two_time(t: f64) -> bool {
    (t.log2() - t.log2().round()).abs() < 1e-9
}

pub fn decay_config() -> RunConfig {
    let spec = GridSpec::square(512, 256.0 * PI);
    let mut cfg = RunConfig::new(spec, offset_bump(&spec, 1.0), 0.05, 64.0);
    cfg.output_times = log_output_times(64.0);
    cfg
}

pub const DECAY_FIT_WINDOW: (f64, f64) = (1.0, 64.0);
/// Window for the `d_t f` fit and the dyadic increments.
pub const DTF_FIT_WINDOW: (f64, f64) = (4.0, 64.0);

pub fn decay(dir: &mut RunDir, cfg: &RunConfig, exec: Execution) -> Result<Outcome> {
    let solver = Solver::with_execution(cfg.clone(), exec)?;
    let mut norms: Vec<NormReport> = Vec::new();
    let mut profiles = Vec::new();
    let mut snapshots = Vec::new();
    let steps = solver.simulate_with(|point| {
        if is_power_of_two_time(point.state.time) {
            profiles.push(point.profile);
            snapshots.push(point.state.field);
        }
        norms.push(point.norms);
        Ok(())
    })?;
    dir.write_csv("norms.csv", &norms)?;
    for field in &snapshots {
        dir.write_snapshot(field)?;
    }

    let series = |g: fn(&NormReport) -> f64| norms.iter().map(|r| (r.t, g(r))).collect::<Vec<_>>();
    let mut metrics = Metrics::new();
    let fits = [
        ("linf", series(|r| r.linf)),
        ("half_a", series(|r| r.linf_half_a)),
        ("half_b", series(|r| r.linf_half_b)),
        ("grad", series(|r| r.linf_grad)),
    ];
    for (name, s) in fits {
        let fit = decay_fit(&s, DECAY_FIT_WINDOW)?;
        metrics.insert(format!("{name}_exponent"), fit.exponent);
        metrics.insert(format!("{name}_r_squared"), fit.r_squared);
    }

    let first = &norms[0];
    let reliable: Vec<&NormReport> = norms.iter().filter(|r| r.weighted_reliable).collect();
    let growth = |g: fn(&NormReport) -> f64, pts: &[&NormReport]| {
        pts.iter().map(|r| g(r)).fold(0.0f64, f64::max) / g(first)
    };
    let all: Vec<&NormReport> = norms.iter().collect();
    metrics.insert("h3_growth".into(), growth(|r| r.h3, &all));
    metrics.insert("w_a_growth".into(), growth(|r| r.w_a, &reliable));
    metrics.insert("w_b_growth".into(), growth(|r| r.w_b, &reliable));
    metrics.insert("weighted_reliable_points".into(), reliable.len() as f64);
    metrics.insert(
        "max_boundary_mass".into(),
        norms.iter().map(|r| r.boundary_mass).fold(0.0f64, f64::max),
    );
    let l2_0 = first.l2;
    metrics.insert(
        "l2_relative_drift".into(),
        norms
            .iter()
            .map(|r| (r.l2 - l2_0).abs() / l2_0)
            .fold(0.0f64, f64::max),
    );
    let dtf_tail: Vec<f64> = norms.iter().filter(|r| r.t >= DTF_FIT_WINDOW.0).map(|r| r.dtf_h2).collect();
    metrics.insert(
        "dtf_decreasing".into(),
        flag(dtf_tail.windows(2).all(|w| w[1] < w[0])),
    );

    let report = scattering_report(solver.grid(), &profiles, &norms, DTF_FIT_WINDOW)?;
    metrics.insert("dtf_exponent".into(), report.dtf_fit.exponent);
    metrics.insert("increments_decreasing".into(), flag(report.increments_decreasing_from(DTF_FIT_WINDOW.0)));
    metrics.insert("tail_finite".into(), flag(report.extrapolated_tail.is_some()));
    if let Some(tail) = report.extrapolated_tail {
        metrics.insert("extrapolated_tail".into(), tail);
    }
    metrics.insert(
        "xnorm_ratio".into(),
        mzk_core::diagnostics::xnorm(&norms)? / first.h3.max(first.w_a).max(first.w_b),
    );
    metrics.insert("steps".into(), steps as f64);
    dir.write_json("scattering.json", &report)?;
    Ok(Outcome::from_run(
        cfg,
        json!({ "fit_window": DECAY_FIT_WINDOW, "dtf_fit_window": DTF_FIT_WINDOW }),
        metrics,
    ))
}

pub fn cubic_scaling(dir: &mut RunDir, exec: Execution) -> Result<Outcome> {
    let spec = GridSpec::square(256, 128.0 * PI);
    let base = RunConfig::new(spec, offset_bump(&spec, 0.5), 0.02, 16.0);
    let eps = [0.02, 0.04, 0.08];
    let scan = cubic_amplitude_scan(&base, &eps, 16.0, exec)?;
    dir.write_csv("cubic.csv", &scan.rows)?;
    let mut metrics = Metrics::new();
    metrics.insert("cubic_slope".into(), scan.slope.unwrap_or(f64::NAN));
    for w in scan.rows.windows(2) {
        metrics.insert(
            format!("doubling_ratio_{}", w[1].epsilon),
            w[1].delta / w[0].delta,
        );
    }
    Ok(Outcome::from_run(&base, json!({ "epsilons": eps }), metrics))
}

pub fn resonance_rho_grid() -> Vec<[f64; 2]> {
    let vals = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];
    vals.iter()
        .flat_map(|&a| vals.iter().map(move |&b| [a, b]))
        .collect()
}

pub fn resonance_algebra(dir: Option<&mut RunDir>, tol: f64, n_random: usize, seed: u64) -> Result<(Outcome, mzk_core::resonance::ScanReport)> {
    let grid = resonance_rho_grid();
    let scan = resonance_scan(&grid, tol, n_random, seed)?;
    let fd = gradient_fd_check(n_random, 5.0, seed.wrapping_add(1));
    let metrics = Metrics::from([
        ("predicate_mismatches".into(), scan.n_predicate_mismatches as f64),
        ("phi_all_plus_unit_error".into(), (scan.phi_all_plus_unit - 24.0).abs()),
        ("m_gradxi_relative".into(), scan.max_m_gradxi_on_resonances),
        ("gradient_fd_error".into(), fd),
        ("off_manifold_false_space".into(), (scan.off_manifold.n_random_false_space + scan.off_manifold.n_perturbed_false_space) as f64),
        ("n_space_time".into(), scan.n_space_time as f64),
    ]);
    if let Some(dir) = dir {
        dir.write_json("resonance.json", &scan)?;
    }
    Ok((
        Outcome::new(json!({ "rho_grid": grid, "tol": tol, "n_random": n_random, "seed": seed }), metrics),
        scan,
    ))
}

pub fn singular_identities(dir: Option<&mut RunDir>, n: usize, seed: u64) -> Result<(Outcome, mzk_core::resonance::IdentityReport)> {
    let report = identity_check(n, 10.0, 1e-3, seed);
    let mut metrics = Metrics::new();
    for (k, v) in report.max_normalized.iter().enumerate() {
        metrics.insert(format!("residual_triple{}", k + 1), *v);
    }
    metrics.insert(
        "residual_max".into(),
        report.max_normalized.iter().copied().fold(0.0f64, f64::max),
    );
    if let Some(dir) = dir {
        dir.write_json("identities.json", &report)?;
    }
    Ok((
        Outcome::new(json!({ "n": n, "range": 10.0, "min_abs": 1e-3, "seed": seed }), metrics),
        report,
    ))
}

pub fn cutoff_symbol_grid(seed: u64) -> SymbolGrid {
    SymbolGrid::random(
        8,
        SymbolGrid::geometric_radii(-24, 8, 4),
        vec![1.0, 2f64.sqrt()],
        seed,
    )
}

pub fn cutoff(dir: &mut RunDir, seed: u64, exec: Execution) -> Result<Outcome> {
    let ss = [1.0, 16.0, 256.0];
    let grid = cutoff_symbol_grid(seed);
    let report = cutoff_scaling(&ss, &grid, exec)?;
    dir.write_csv("cutoff.csv", &report.rows)?;
    let metrics = Metrics::from([
        ("chi_invariance_deviation".into(), report.max_invariance_deviation),
        ("weighted_exponent".into(), report.weighted_exponent),
        (
            "weighted_exponent_relative_error".into(),
            (report.weighted_exponent + 0.5).abs() / 0.5,
        ),
    ]);
    Ok(Outcome::new(
        json!({ "s": ss, "directions": 8, "radii_a": "2^(k/4), k = -24..=8", "radii_b": [1.0, 2f64.sqrt()], "max_order": 2, "seed": seed }),
        metrics,
    ))
}

pub const DEFAULT_RESONANCE_TOL: f64 = DEFAULT_TOL;

