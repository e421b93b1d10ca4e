use std::f64::consts::PI;

use mzk_core::diagnostics::{decay_fit, scattering_report, xnorm, NormReport};
use mzk_core::solver::{RunConfig, Solver};
use mzk_core::spectral::coords::{two_two_thirds, AMPLITUDE_FACTOR};
use mzk_core::spectral::{GridSpec, InitialCondition};
use mzk_core::Error;

fn series(f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
    (0..12).map(|k| 2f64.powf(k as f64 / 2.0)).map(|t| (t, f(t))).collect()
}

#[test]
fn exact_power_laws_are_recovered() {
    let fit = decay_fit(&series(|t| t.powf(-2.0 / 3.0)), (1.0, 64.0)).unwrap();
    assert!((fit.exponent + 2.0 / 3.0).abs() < 1e-12);
    assert!(fit.intercept.abs() < 1e-12);
    assert!((fit.r_squared - 1.0).abs() < 1e-12);
    assert_eq!(fit.n_points, 12);

    let fit = decay_fit(&series(|t| 3.0 * t.powf(-5.0 / 6.0)), (2.0, 16.0)).unwrap();
    assert!((fit.exponent + 5.0 / 6.0).abs() < 1e-12);
    assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
    assert_eq!(fit.n_points, 7);
    assert!((fit.predict(5.0) - 3.0 * 5f64.powf(-5.0 / 6.0)).abs() < 1e-12);
}

#[test]
fn fit_rejects_bad_windows() {
    let s = series(|t| 1.0 / t);
    assert!(decay_fit(&s, (0.0, 4.0)).is_err());
    assert!(decay_fit(&s, (4.0, 2.0)).is_err());
    assert!(matches!(decay_fit(&s, (100.0, 200.0)), Err(Error::TooFewPoints { .. })));
}

fn gaussian(width: f64) -> InitialCondition {
    InitialCondition::Gaussian {
        width,
        center: [0.0, 0.0],
        modulation: None,
    }
}

/// `v = A exp(-q (d_a^2 + d_a d_b + d_b^2))`, `q = c^2 / (3 w^2)`, so `v^2` is a
/// Gaussian with precision matrix `2q [[1, 1/2], [1/2, 1]]`.
fn gaussian_moments(eps: f64, width: f64) -> (f64, f64) {
    let amp = AMPLITUDE_FACTOR * eps;
    let q = two_two_thirds().powi(2) / (3.0 * width * width);
    let det: f64 = (2.0 * q) * (2.0 * q) * 0.75;
    let mass = amp * amp * PI / det.sqrt();
    let inv_aa = 2.0 * q / det;
    (mass.sqrt(), (mass * inv_aa / 2.0).sqrt())
}

#[test]
fn weighted_norm_of_gaussian_profile_matches_closed_form() {
    let (eps, width) = (0.3, 2.0);
    let mut cfg = RunConfig::new(GridSpec::square(128, 64.0), gaussian(width), eps, 1.0);
    cfg.t_start = 0.0;
    let solver = Solver::new(cfg).unwrap();
    let p = solver.record(&solver.initial_state().unwrap()).unwrap();
    let (l2, w) = gaussian_moments(eps, width);
    assert!((p.norms.l2 - l2).abs() <= 1e-10 * l2);
    assert!((p.norms.w_a - w).abs() <= 1e-8 * w, "{} vs {w}", p.norms.w_a);
    assert!((p.norms.w_b - w).abs() <= 1e-8 * w);
    assert!(p.norms.weighted_reliable);
}

#[test]
fn cosine_norms() {
    let spec = GridSpec::square(32, 2.0 * PI);
    let cfg = RunConfig::new(spec, InitialCondition::Cosine { k_a: 1.0, k_b: 0.0 }, 1.0, 2.0);
    let solver = Solver::new(cfg).unwrap();
    let n = solver.record(&solver.initial_state().unwrap()).unwrap().norms;
    // ||cos||^2 = area / 2 and <k>^3 = 2^{3/2} at |k| = 1.
    assert!((n.l2 - (2.0 * PI * PI).sqrt()).abs() < 1e-12);
    assert!((n.h3 / n.l2 - 2f64.powf(1.5)).abs() < 1e-12);
    assert!((n.linf - 1.0).abs() < 1e-12);
    assert!((n.linf_grad - 1.0).abs() < 1e-12);
    assert!((n.linf_half_a - 1.0).abs() < 1e-12);
    assert!(n.linf_half_b < 1e-12);
}

#[test]
fn zero_field_has_zero_norms() {
    let solver = Solver::new(RunConfig::new(GridSpec::square(32, 20.0), gaussian(1.0), 0.0, 2.0)).unwrap();
    let n = solver.record(&solver.initial_state().unwrap()).unwrap().norms;
    let all = [n.l2, n.h3, n.linf, n.linf_grad, n.linf_half_a, n.linf_half_b, n.w_a, n.w_b, n.dtf_h2, n.boundary_mass];
    assert!(all.iter().all(|&v| v == 0.0));
}

fn offset_bump(len: f64) -> InitialCondition {
    InitialCondition::BandLimitedGaussian {
        width: 1.0,
        k_pass: 1.0,
        k_stop: 1.6,
        center: [two_two_thirds() * 0.3 * len, 0.0],
    }
}

#[test]
fn linear_flow_decays_at_two_thirds_and_profile_is_frozen() {
    let len = 256.0 * PI;
    let mut cfg = RunConfig::new(GridSpec::square(512, len), offset_bump(len), 0.05, 64.0);
    cfg.linear_only = true;
    cfg.dt_max = 1.0;
    cfg.output_times = (1..24).map(|k| 2f64.powf(k as f64 / 4.0)).collect();
    let solver = Solver::new(cfg).unwrap();
    let traj = solver.simulate().unwrap();
    let norms: Vec<NormReport> = traj.norms();
    let linf: Vec<(f64, f64)> = norms.iter().map(|n| (n.t, n.linf)).collect();
    let fit = decay_fit(&linf, (1.0, 64.0)).unwrap();
    assert!((-0.70..=-0.62).contains(&fit.exponent), "{fit:?}");

    let x0 = xnorm(&norms[..1]).unwrap();
    assert!((xnorm(&norms).unwrap() - x0).abs() <= 1e-10 * x0);
    for n in &norms {
        assert_eq!(n.dtf_h2, 0.0);
    }
    let profiles = traj.profiles();
    for p in &profiles {
        assert!(p.hs_distance(&profiles[0], solver.grid(), 2.0).unwrap() <= 1e-10 * profiles[0].hs_norm(solver.grid(), 2.0));
    }
}

#[test]
fn scattering_report_on_nonlinear_run() {
    let len = 64.0 * PI;
    let mut cfg = RunConfig::new(GridSpec::square(128, len), offset_bump(len), 0.2, 16.0);
    cfg.boundary_mass_threshold = 1e-3;
    cfg.output_times = vec![1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0];
    let solver = Solver::new(cfg).unwrap();
    let traj = solver.simulate().unwrap();
    let report = scattering_report(solver.grid(), &traj.profiles(), &traj.norms(), (2.0, 16.0)).unwrap();
    let t1: Vec<f64> = report.pairs.iter().map(|p| p.t1).collect();
    assert_eq!(t1, vec![1.0, 2.0, 4.0, 8.0]);
    assert_eq!(report.horizon, 16.0);
    assert!(report.pairs.iter().all(|p| p.distance > 0.0));
    assert!(report.dtf_fit.exponent < 0.0);
    if report.dtf_fit.exponent < -1.0 {
        assert!(report.extrapolated_tail.unwrap() > 0.0);
    } else {
        assert!(report.extrapolated_tail.is_none());
    }

    let few = &traj.profiles()[..3];
    assert!(matches!(
        scattering_report(solver.grid(), few, &traj.norms(), (2.0, 16.0)),
        Err(Error::TooFewPoints { .. })
    ));
}

#[test]
fn xnorm_needs_points() {
    assert!(matches!(xnorm(&[]), Err(Error::TooFewPoints { .. })));
}
