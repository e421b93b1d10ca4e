use std::f64::consts::PI;

use mzk_core::diagnostics::cubic_amplitude_scan;
use mzk_core::linear::ProfileSnapshot;
use mzk_core::solver::{
    duhamel_oracle, max_relative_deviation, nonlinear_rhs, trilinear_pseudospectral, Aliasing,
    RunConfig, SimState, Solver, TrilinearQuery, TrilinearSymbol,
};
use mzk_core::spectral::{Field, Frame, Grid, GridSpec, InitialCondition, SpectralField};
use mzk_core::{Error, Execution};
use num_complex::Complex64;
use proptest::prelude::*;

fn bump(width: f64) -> InitialCondition {
    InitialCondition::BandLimitedGaussian {
        width,
        k_pass: 1.0,
        k_stop: 1.6,
        center: [0.0, 0.0],
    }
}

fn config(n: usize, len: f64, eps: f64, t_end: f64) -> RunConfig {
    RunConfig::new(GridSpec::square(n, len), bump(1.5), eps, t_end)
}

fn field_from(grid: &Grid, f: impl Fn(f64, f64) -> f64) -> Field {
    let mut out = Field::zeros(*grid.spec(), Frame::Ab);
    for (i, &xa) in grid.a.x.iter().enumerate() {
        for (j, &xb) in grid.b.x.iter().enumerate() {
            out.values[grid.flat(i, j)] = f(xa, xb);
        }
    }
    out
}

fn coeff_gap(a: &[Complex64], b: &[Complex64]) -> f64 {
    let scale = b.iter().fold(0.0f64, |m, c| m.max(c.norm()));
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
}

#[test]
fn rhs_of_zero_is_zero() {
    let g = Grid::new(GridSpec::square(16, 10.0)).unwrap();
    let out = nonlinear_rhs(&g, &SpectralField::zeros(*g.spec())).unwrap();
    assert!(out.coeffs.iter().all(|c| c.norm() == 0.0));
}

/// `cos^3 x = (3 cos x + cos 3x) / 4`, so
/// `-(d_a + d_b)(cos^3 x_a) = 3 (sin x_a + sin 3 x_a) / 4`.
#[test]
fn rhs_of_single_cosine_matches_trig_identity() {
    for n in [8, 16, 32] {
        let g = Grid::new(GridSpec::square(n, 2.0 * PI)).unwrap();
        let sf = g.forward(&field_from(&g, |a, _| a.cos())).unwrap();
        let out = g.inverse(&nonlinear_rhs(&g, &sf).unwrap()).unwrap();
        let expect = field_from(&g, |a, _| 0.75 * (a.sin() + (3.0 * a).sin()));
        let err = out.values.iter().zip(&expect.values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(err < 1e-12, "n={n} err={err:e}");
    }
}

fn random_profile(spec: GridSpec, seed: u64) -> ProfileSnapshot {
    use rand::{Rng, SeedableRng};
    let grid = Grid::new(spec).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut f = Field::zeros(spec, Frame::Ab);
    f.values.iter_mut().for_each(|v| *v = rng.gen_range(-1.0..1.0));
    let mut sf = grid.forward(&f).unwrap();
    for i in 0..grid.n_a() {
        for j in 0..grid.n_b() {
            if grid.is_nyquist(i, j) {
                sf.coeffs[grid.flat(i, j)] = Complex64::new(0.0, 0.0);
            }
        }
    }
    ProfileSnapshot::from_spectral(&grid, &sf).unwrap()
}

#[test]
fn oracle_matches_transforms_on_small_grids() {
    let specs = [
        GridSpec::square(8, 2.0 * PI),
        GridSpec::new(8, 16, 3.0, 5.0),
        GridSpec::new(16, 8, 7.0, 2.0),
        GridSpec::square(16, 4.0 * PI),
    ];
    for (k, spec) in specs.into_iter().enumerate() {
        let profile = random_profile(spec, k as u64);
        for aliasing in [Aliasing::Exact, Aliasing::Periodic] {
            for symbol in [TrilinearSymbol::Sum, TrilinearSymbol::One] {
                for s in [0.0, 0.7, -2.0] {
                    let q = TrilinearQuery {
                        grid: spec,
                        s,
                        profile: profile.clone(),
                        symbol,
                        aliasing,
                    };
                    let dev = max_relative_deviation(&trilinear_pseudospectral(&q).unwrap(), &duhamel_oracle(&q).unwrap());
                    assert!(dev <= 1e-10, "{spec:?} {aliasing:?} {symbol:?} s={s}: {dev:e}");
                }
            }
        }
    }
}

#[test]
fn solver_rhs_is_minus_oracle_at_time_zero() {
    let spec = GridSpec::square(16, 9.0);
    let grid = Grid::new(spec).unwrap();
    let profile = random_profile(spec, 77);
    let q = TrilinearQuery {
        grid: spec,
        s: 0.0,
        profile: profile.clone(),
        symbol: TrilinearSymbol::Sum,
        aliasing: Aliasing::Exact,
    };
    let minus: Vec<Complex64> = duhamel_oracle(&q).unwrap().into_iter().map(|c| -c).collect();
    let rhs = nonlinear_rhs(&grid, &profile.as_spectral()).unwrap();
    assert!(max_relative_deviation(&rhs.coeffs, &minus) <= 1e-10);
}

#[test]
fn oracle_of_single_mode() {
    let spec = GridSpec::square(8, 2.0 * PI);
    let grid = Grid::new(spec).unwrap();
    let c = Complex64::new(0.3, -0.4);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 64];
    coeffs[grid.flat(1, 0)] = c;
    let profile = ProfileSnapshot {
        grid: spec,
        time: 0.0,
        coeffs,
    };
    let s = 0.37;
    let q = TrilinearQuery {
        grid: spec,
        s,
        profile: profile.clone(),
        symbol: TrilinearSymbol::Sum,
        aliasing: Aliasing::Exact,
    };
    let out = duhamel_oracle(&q).unwrap();
    // phi = 3^3 - 3 * 1^3 = 24; symbol i (xi_a + xi_b) = 3i.
    let expect = Complex64::from_polar(1.0, -24.0 * s) * Complex64::new(0.0, 3.0) * c * c * c;
    for (idx, v) in out.iter().enumerate() {
        if idx == grid.flat(3, 0) {
            assert!((v - expect).norm() < 1e-15);
        } else {
            assert_eq!(v.norm(), 0.0);
        }
    }
    let zero = ProfileSnapshot {
        coeffs: vec![Complex64::new(0.0, 0.0); 64],
        ..profile
    };
    let q0 = TrilinearQuery { profile: zero, ..q };
    assert!(duhamel_oracle(&q0).unwrap().iter().all(|v| v.norm() == 0.0));
}

#[test]
fn oracle_rejects_large_grids() {
    let spec = GridSpec::square(32, 1.0);
    let q = TrilinearQuery {
        grid: spec,
        s: 0.0,
        profile: ProfileSnapshot {
            grid: spec,
            time: 0.0,
            coeffs: vec![Complex64::new(0.0, 0.0); 1024],
        },
        symbol: TrilinearSymbol::One,
        aliasing: Aliasing::Exact,
    };
    assert!(matches!(duhamel_oracle(&q), Err(Error::GridTooLarge { .. })));
}

#[test]
fn zero_data_only_advances_time() {
    let solver = Solver::new(config(32, 16.0 * PI, 0.0, 2.0)).unwrap();
    let s0 = solver.initial_state().unwrap();
    let s1 = solver.step(&s0, 0.1).unwrap();
    assert_eq!(s1.spectral.coeffs, s0.spectral.coeffs);
    assert!((s1.time - 1.1).abs() < 1e-15);
    let traj = solver.simulate().unwrap();
    for p in &traj.points {
        assert_eq!(p.norms.l2, 0.0);
        assert_eq!(p.norms.h3, 0.0);
        assert_eq!(p.norms.linf, 0.0);
        assert_eq!(p.norms.dtf_h2, 0.0);
    }
}

/// Runs `[t0, t0 + n h]` with fixed steps.
fn run_fixed(solver: &Solver, start: &SimState, h: f64, n: usize) -> SimState {
    let mut s = start.clone();
    for _ in 0..n {
        s = solver.step(&s, h).unwrap();
    }
    s
}

#[test]
fn step_converges_at_fourth_order() {
    let mut cfg = config(32, 32.0 * PI, 2.0, 2.0);
    cfg.cfl_safety = 0.9;
    cfg.dt_max = 0.5;
    let solver = Solver::new(cfg).unwrap();
    let s0 = solver.initial_state().unwrap();
    let reference = run_fixed(&solver, &s0, 1.0 / 64.0, 64);
    let err = |n: usize| {
        let s = run_fixed(&solver, &s0, 1.0 / n as f64, n);
        s.spectral.sub(&reference.spectral).l2_norm()
    };
    let (e1, e2) = (err(4), err(8));
    let ratio = e1 / e2;
    assert!((12.0..=20.0).contains(&ratio), "errors {e1:e} {e2:e} ratio {ratio}");
}

#[test]
fn time_reversal_returns_to_initial_data() {
    let mut cfg = config(64, 32.0 * PI, 0.05, 4.0);
    cfg.boundary_mass_threshold = 1.0;
    let solver = Solver::new(cfg).unwrap();
    let s0 = solver.initial_state().unwrap();
    let h = 0.05;
    let n = 60;
    let forward = run_fixed(&solver, &s0, h, n);
    // w(x) = v(-x): coefficients conjugate for a real field.
    let flip = |s: &SimState| SpectralField {
        coeffs: s.spectral.coeffs.iter().map(|c| c.conj()).collect(),
        ..s.spectral.clone()
    };
    let mut w = flip(&forward);
    w.time = 1.0;
    let back = run_fixed(&solver, &solver.state_from_spectral(w).unwrap(), h, n);
    let restored = flip(&back);
    let gap = coeff_gap(&restored.coeffs, &s0.spectral.coeffs);
    assert!(gap <= 1e-6, "gap {gap:e}");
}

#[test]
fn simulate_hits_output_times_and_conserves_l2() {
    let mut cfg = config(64, 32.0 * PI, 0.2, 3.0);
    cfg.output_times = vec![1.5, 2.0, 2.25];
    let solver = Solver::new(cfg).unwrap();
    let traj = solver.simulate().unwrap();
    let times: Vec<f64> = traj.points.iter().map(|p| p.state.time).collect();
    assert_eq!(times, vec![1.0, 1.5, 2.0, 2.25, 3.0]);
    let l2_0 = traj.points[0].norms.l2;
    for p in &traj.points {
        assert!((p.norms.l2 - l2_0).abs() <= 1e-8 * l2_0);
        assert_eq!(p.state.config_hash, solver.config_hash());
    }
}

#[test]
fn doubling_amplitude_scales_profile_change_by_eight() {
    let base = RunConfig::new(GridSpec::square(128, 64.0 * PI), bump(1.0), 0.05, 2.0);
    let scan = cubic_amplitude_scan(&base, &[0.05, 0.1], 2.0, Execution::Parallel).unwrap();
    let ratio = scan.rows[1].delta / scan.rows[0].delta;
    assert!((7.0..=9.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn oversized_step_rejected() {
    let solver = Solver::new(config(32, 16.0 * PI, 0.1, 2.0)).unwrap();
    let s0 = solver.initial_state().unwrap();
    assert!(matches!(solver.step(&s0, 0.5), Err(Error::StepSize { .. })));
    assert!(matches!(solver.step(&s0, -0.01), Err(Error::StepSize { .. })));
}

#[test]
fn mass_at_boundary_aborts_run() {
    let spec = GridSpec::square(64, 16.0 * PI);
    let ic = InitialCondition::Gaussian {
        width: 3.0,
        center: [0.0, 0.0],
        modulation: None,
    };
    let solver = Solver::new(RunConfig::new(spec, ic, 0.05, 20.0)).unwrap();
    assert!(matches!(solver.simulate(), Err(Error::Wraparound { .. })));
}

#[test]
fn sequential_and_parallel_steps_agree_bitwise() {
    let cfg = config(64, 32.0 * PI, 0.3, 2.0);
    let seq = Solver::with_execution(cfg.clone(), Execution::Sequential).unwrap();
    let par = Solver::with_execution(cfg, Execution::Parallel).unwrap();
    let a = run_fixed(&seq, &seq.initial_state().unwrap(), 0.05, 4);
    let b = run_fixed(&par, &par.initial_state().unwrap(), 0.05, 4);
    assert_eq!(a.spectral.coeffs, b.spectral.coeffs);
    assert_eq!(a.field.values, b.field.values);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn short_runs_conserve_l2(eps in 0.0f64..0.5, width in 0.8f64..2.5, h in 0.01f64..0.1) {
        let cfg = RunConfig::new(GridSpec::square(32, 24.0 * PI), bump(width), eps, 2.0);
        let solver = Solver::new(cfg).unwrap();
        let s0 = solver.initial_state().unwrap();
        let h = h.min(solver.step_limit(&s0));
        let s = run_fixed(&solver, &s0, h, 10);
        let l0 = s0.spectral.l2_norm();
        prop_assert!((s.spectral.l2_norm() - l0).abs() <= 1e-9 * l0.max(1e-300));
        prop_assert!(s.spectral.hermitian_defect() <= 1e-12);
    }
}
