use std::f64::consts::PI;

use mzk_core::linear::{
    ai, ai_contour, airy_kernel_closed, airy_kernel_spectral, envelope_check, envelope_constant_1d,
    kernel_sample_closed, kernel_sample_spectral, propagate_linear, profile_of, weak_lp_from_magnitudes,
    weak_lp_norm, KernelGrid1d, ProfileSnapshot,
};
use mzk_core::solver::{RunConfig, Solver};
use mzk_core::spectral::{Field, Frame, Grid, GridSpec, InitialCondition, SpectralField};
use mzk_core::Execution;
use proptest::prelude::*;

/// Reference values of `Ai` at 20 significant digits.
const AI_REFERENCE: [(f64, f64); 13] = [
    (-50.0, -0.161_881_423_612_320_92),
    (-37.5, 0.013_668_155_455_244_661),
    (-20.0, -0.176_406_127_077_984_69),
    (-10.0, 0.040_241_238_486_443_191),
    (-6.6, -0.163_526_462_727_729_84),
    (-6.5, -0.238_020_301_997_115_80),
    (-6.4, -0.297_137_622_136_627_62),
    (-3.0, -0.378_814_293_677_658_07),
    (0.0, 0.355_028_053_887_817_24),
    (4.5, 3.302_503_235_143_089_8e-4),
    (6.4, 3.617_762_318_851_799_7e-6),
    (6.6, 2.156_599_952_596_922e-6),
    (10.0, 1.104_753_255_289_868_6e-10),
];

#[test]
fn ai_matches_reference_values() {
    for (z, v) in AI_REFERENCE {
        let tol = 1e-10 * v.abs().max(1e-3);
        assert!((ai(z) - v).abs() <= tol, "Ai({z}) = {} vs {v}", ai(z));
    }
}

/// `Ai'' = z Ai` integrated by classical RK4 from the values at the origin,
/// `Ai(0) = 3^{-2/3} / Gamma(2/3)`, `Ai'(0) = -3^{-1/3} / Gamma(1/3)`.
fn ai_ode(z: f64) -> f64 {
    const GAMMA_THIRD: f64 = 2.678_938_534_707_747_6;
    const GAMMA_TWO_THIRDS: f64 = 1.354_117_939_426_400_4;
    let mut y = [3f64.powf(-2.0 / 3.0) / GAMMA_TWO_THIRDS, -3f64.powf(-1.0 / 3.0) / GAMMA_THIRD];
    let steps = (z.abs() / 1e-4).ceil().max(1.0) as usize;
    let h = z / steps as f64;
    let f = |x: f64, y: [f64; 2]| [y[1], x * y[0]];
    let mut x = 0.0;
    for _ in 0..steps {
        let k1 = f(x, y);
        let k2 = f(x + 0.5 * h, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = f(x + 0.5 * h, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = f(x + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        for c in 0..2 {
            y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        }
        x += h;
    }
    y[0]
}

#[test]
fn ai_and_contour_match_ode_oracle() {
    for z in [-5.0, -3.7, -2.0, -0.5, 0.0, 0.8, 2.0, 3.3] {
        let o = ai_ode(z);
        assert!((ai(z) - o).abs() < 1e-10, "series z={z}");
        assert!((ai_contour(z) - o).abs() < 1e-10, "contour z={z}");
    }
}

#[test]
fn kernel_closed_examples() {
    assert!((airy_kernel_closed(1.0 / 3.0, 0.0).unwrap() - 0.355_028_053_9).abs() < 1e-9);
    let k1 = airy_kernel_closed(1.0, 0.0).unwrap();
    assert!((k1 - 3f64.powf(-1.0 / 3.0) * 0.355_028_053_887_817_24).abs() < 1e-14);
    for t in [0.5, 2.0, 7.0, 30.0] {
        for x in [-12.0, -1.0, 0.0, 0.4, 5.0] {
            let lhs = airy_kernel_closed(t, x).unwrap();
            let rhs = t.powf(-1.0 / 3.0) * airy_kernel_closed(1.0, t.powf(-1.0 / 3.0) * x).unwrap();
            assert!((lhs - rhs).abs() <= 1e-13 * rhs.abs().max(1e-3), "t={t} x={x}");
        }
    }
    assert!(airy_kernel_closed(0.0, 1.0).is_err());
}

#[test]
fn spectral_kernel_matches_closed_form_at_other_times() {
    for t in [0.5, 2.0, 27.0] {
        let g = KernelGrid1d::for_time(t, 20.0);
        g.check(t, 20.0).unwrap();
        let (xs, ks) = airy_kernel_spectral(t, &g, 20.0).unwrap();
        let err = xs
            .iter()
            .zip(&ks)
            .map(|(&x, &k)| (k - airy_kernel_closed(t, x).unwrap()).abs())
            .fold(0.0, f64::max);
        assert!(err <= 1e-6, "t={t} err={err:e}");
    }
}

#[test]
fn sampled_kernels_agree() {
    let c = kernel_sample_closed(2.0, 6.0, 60).unwrap();
    let s = kernel_sample_spectral(2.0, 6.0, 60, Execution::Sequential).unwrap();
    assert_eq!(c.points, s.points);
    assert!(s.is_finite());
    let err = c.values.iter().zip(&s.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(err < 1e-8);
}

/// `sup_{x <= -1} |Ai(x)| |x|^{1/4}` from closed-form samples at spacing `h`.
fn airy_envelope(h: f64) -> f64 {
    let n = (199.0 / h) as usize;
    (0..=n)
        .map(|j| -1.0 - j as f64 * h)
        .map(|x| ai(x).abs() * x.abs().powf(0.25))
        .fold(0.0, f64::max)
}

#[test]
fn airy_envelope_finite_and_stable_under_refinement() {
    let coarse = airy_envelope(1e-2);
    let fine = airy_envelope(2.5e-3);
    assert!(fine.is_finite() && fine < 1.0);
    assert!((coarse / fine - 1.0).abs() < 1e-3);
    // Oscillation amplitude tends to pi^{-1/2}.
    assert!(fine > 0.5 && fine < 0.6, "{fine}");
}

#[test]
fn envelope_constant_matches_dense_oracle() {
    let y_max = 10.0;
    let h = 1e-3;
    let n = (y_max / h) as i64;
    let dense = (-n..=n)
        .map(|j| j as f64 * h)
        .map(|y| airy_kernel_closed(1.0, y).unwrap().abs() * (1.0 + y * y).powf(0.125))
        .fold(0.0, f64::max);
    for t in [1.0, 10.0] {
        let c = envelope_constant_1d(t, 0.0, y_max).unwrap();
        assert!((c / dense - 1.0).abs() < 1e-3, "t={t}: {c} vs {dense}");
    }
    let env = envelope_check(&[1.0, 10.0, 100.0], 0.0, 0.0, y_max, Execution::Parallel).unwrap();
    for e in &env {
        assert!((e.constant / (dense * dense) - 1.0).abs() < 2e-3);
    }
}

#[test]
fn envelope_fractional_finite_and_beta_checked() {
    let env = envelope_check(&[1.0, 10.0, 100.0], 0.45, 0.45, 10.0, Execution::Sequential).unwrap();
    let lo = env.iter().map(|e| e.constant).fold(f64::INFINITY, f64::min);
    let hi = env.iter().map(|e| e.constant).fold(0.0, f64::max);
    assert!(lo > 0.0 && hi.is_finite());
    assert!(hi / lo - 1.0 < 0.01);
    assert!(envelope_check(&[1.0], 0.6, 0.0, 10.0, Execution::Sequential).is_err());
}

#[test]
fn weak_lp_of_unit_square_indicator() {
    // Unit square of ones inside a 3x3 box of zeros.
    let n = 300;
    let h = 3.0 / n as f64;
    let mags: Vec<f64> = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            let inside = |m: usize| (100..200).contains(&m);
            if inside(i) && inside(j) {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    for p in [1.0, 2.5, 4.0, 6.0] {
        let r = weak_lp_from_magnitudes(&mags, h * h, p, 400).unwrap();
        assert!((r.quasi_norm - 1.0).abs() < 1e-12, "p={p}");
        assert!((r.raw_sup - 1.0).abs() < 1e-12);
    }
}

/// For `g(x) = |x|^{-2/p}` on `R^2`, `|{g >= lambda}| = pi lambda^{-p}`, so
/// `lambda |{g >= lambda}|^{1/p} = pi^{1/p}` at every level. The samples are
/// capped at the level whose superlevel disc has radius 1/2, so the singular
/// point is resolved by many cells.
#[test]
fn weak_lp_of_power_law() {
    let (n, half) = (800, 4.0);
    let h = 2.0 * half / n as f64;
    for p in [4.0, 6.0] {
        let cap = 0.5f64.powf(-2.0 / p);
        let mags: Vec<f64> = (0..n * n)
            .map(|k| {
                let x = -half + ((k / n) as f64 + 0.5) * h;
                let y = -half + ((k % n) as f64 + 0.5) * h;
                (x * x + y * y).powf(-1.0 / p).min(cap)
            })
            .collect();
        let r = weak_lp_from_magnitudes(&mags, h * h, p, 400).unwrap();
        let expect = PI.powf(1.0 / p);
        assert!((r.quasi_norm / expect - 1.0).abs() < 0.05, "p={p}: {} vs {expect}", r.quasi_norm);
    }
}

#[test]
fn weak_lp_kernel_scaling() {
    let sample = |t: f64| kernel_sample_spectral(t, 16.0 * t.cbrt(), 200, Execution::Parallel).unwrap();
    let (s1, s8) = (sample(1.0), sample(8.0));
    for p in [4.0, 6.0] {
        let ratio = weak_lp_norm(&s8, p).unwrap().quasi_norm / weak_lp_norm(&s1, p).unwrap().quasi_norm;
        let predicted = 8f64.powf(-2.0 / 3.0 + 2.0 / (3.0 * p));
        assert!((ratio / predicted - 1.0).abs() < 0.05, "p={p}");
    }
    assert!(weak_lp_from_magnitudes(&[1.0], 1.0, 0.5, 10).is_err());
}

fn random_spectral(grid: &Grid, vals: &[f64]) -> SpectralField {
    let mut f = Field::zeros(*grid.spec(), Frame::Ab);
    f.values.copy_from_slice(vals);
    grid.forward(&f).unwrap()
}

#[test]
fn zero_step_is_identity() {
    let g = Grid::new(GridSpec::square(16, 10.0)).unwrap();
    let vals: Vec<f64> = (0..256).map(|k| ((k * 37 % 101) as f64 / 50.0) - 1.0).collect();
    let sf = random_spectral(&g, &vals);
    assert_eq!(propagate_linear(&g, &sf, 0.0).unwrap().coeffs, sf.coeffs);
}

#[test]
fn profile_at_time_zero_is_the_solution() {
    let g = Grid::new(GridSpec::square(16, 10.0)).unwrap();
    let vals: Vec<f64> = (0..256).map(|k| ((k * 13 % 29) as f64 / 14.0) - 1.0).collect();
    let sf = random_spectral(&g, &vals);
    let p = ProfileSnapshot::from_spectral(&g, &sf).unwrap();
    assert_eq!(p.coeffs, sf.coeffs);
    let back = p.to_spectral(&g).unwrap();
    assert_eq!(back.coeffs, sf.coeffs);
}

fn small_config(eps: f64, linear_only: bool) -> RunConfig {
    let spec = GridSpec::square(64, 32.0 * PI);
    let ic = InitialCondition::BandLimitedGaussian {
        width: 1.5,
        k_pass: 1.0,
        k_stop: 1.6,
        center: [0.0, 0.0],
    };
    let mut cfg = RunConfig::new(spec, ic, eps, 10.0);
    cfg.linear_only = linear_only;
    cfg.output_times = vec![2.0, 5.0];
    cfg.boundary_mass_threshold = 1.0;
    cfg
}

#[test]
fn linear_run_keeps_profile_fixed() {
    for (eps, linear) in [(0.3, true), (0.0, false)] {
        let solver = Solver::new(small_config(eps, linear)).unwrap();
        let traj = solver.simulate().unwrap();
        let f1 = &traj.points[0].profile;
        let norm = f1.hs_norm(solver.grid(), 0.0);
        for pt in &traj.points[1..] {
            let d = pt.profile.hs_distance(f1, solver.grid(), 0.0).unwrap();
            assert!(d <= 1e-10 * norm.max(1e-300), "eps={eps} t={} d={d:e}", pt.state.time);
            let via = profile_of(solver.grid(), &pt.state).unwrap();
            assert_eq!(via.coeffs, pt.profile.coeffs);
        }
    }
}

#[test]
fn linear_only_step_equals_propagator() {
    let solver = Solver::new(small_config(0.3, true)).unwrap();
    let s0 = solver.initial_state().unwrap();
    let s1 = solver.step(&s0, 0.07).unwrap();
    let direct = propagate_linear(solver.grid(), &s0.spectral, 0.07).unwrap();
    assert_eq!(s1.spectral.coeffs, direct.coeffs);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn propagation_is_unitary_and_invertible(vals in prop::collection::vec(-1.0f64..1.0, 256), dt in -20.0f64..20.0) {
        let g = Grid::new(GridSpec::square(16, 7.0)).unwrap();
        let sf = random_spectral(&g, &vals);
        let fwd = propagate_linear(&g, &sf, dt).unwrap();
        let back = propagate_linear(&g, &fwd, -dt).unwrap();
        let l2 = sf.l2_norm();
        prop_assert!((fwd.l2_norm() - l2).abs() <= 1e-12 * l2);
        let scale = sf.max_abs();
        let gap = back.coeffs.iter().zip(&sf.coeffs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(gap <= 1e-12 * scale);
    }
}
