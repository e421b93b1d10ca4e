//! Named experiments. Each acceptance criterion is owned by exactly one preset.

use std::path::{Path, PathBuf};
use std::time::Instant;

use chrono::{SecondsFormat, Utc};
use mzk_core::Execution;

use crate::error::{CliError, Result};
use crate::experiments::{self as exp, Outcome};
use crate::manifest::{evaluate, Comparator, Expectation, RunManifest};
use crate::output::RunDir;

type Runner = fn(&mut RunDir, u64, Execution) -> Result<Outcome>;

pub struct ExperimentPreset {
    pub name: &'static str,
    pub criteria: &'static [u8],
    pub seed: u64,
    pub summary: &'static str,
    expected: fn() -> Vec<Expectation>,
    run: Runner,
}

impl ExperimentPreset {
    pub fn expected(&self) -> Vec<Expectation> {
        (self.expected)()
    }
}

use Comparator::{Ge, Le, Lt};

fn e(criterion: u8, metric: &str, cmp: Comparator, threshold: f64) -> Expectation {
    Expectation::new(criterion, metric, cmp, threshold)
}

pub static PRESETS: &[ExperimentPreset] = &[
    ExperimentPreset {
        name: "linear-unitarity",
        criteria: &[1],
        seed: 1,
        summary: "1000 linear semigroup steps on 256^2; relative L2 drift",
        expected: || vec![e(1, "l2_relative_drift", Le, 1e-12)],
        run: exp::linear_unitarity,
    },
    ExperimentPreset {
        name: "airy-crosscheck",
        criteria: &[2],
        seed: 0,
        summary: "spectral vs closed-form Airy kernel at t = 1, 8 on |x| <= 20",
        expected: || {
            vec![
                e(2, "max_abs_error_t1", Le, 1e-6),
                e(2, "max_abs_error_t8", Le, 1e-6),
                e(2, "ai0_vs_contour", Le, 1e-9),
                e(2, "ai0_vs_reference", Le, 1e-9),
            ]
        },
        run: |dir, _, _| exp::airy_crosscheck(dir, &[1.0, 8.0], 20.0),
    },
    ExperimentPreset {
        name: "kernel-envelope",
        criteria: &[3],
        seed: 0,
        summary: "self-similar collapse of K_t and envelope constants at t = 1, 10, 100",
        expected: || {
            vec![
                e(3, "self_similarity_deviation", Le, 0.01),
                e(3, "envelope_beta0_spread", Le, 0.01),
                e(3, "envelope_beta0_finite", Ge, 1.0),
                e(3, "envelope_beta045_finite", Ge, 1.0),
            ]
        },
        run: |dir, _, exec| exp::kernel_envelope(dir, exec),
    },
    ExperimentPreset {
        name: "kernel-weaklp",
        criteria: &[4],
        seed: 0,
        summary: "weak-L^p quasi-norm of K_t for p = 4, 6 over t = 1, 8, 64",
        expected: || {
            vec![
                e(4, "exponent_deviation_p4", Le, 0.03),
                e(4, "exponent_deviation_p6", Le, 0.03),
            ]
        },
        run: |dir, _, exec| exp::kernel_weaklp(dir, &[4.0, 6.0], &[1.0, 8.0, 64.0], exec),
    },
    ExperimentPreset {
        name: "duhamel-oracle",
        criteria: &[5],
        seed: 5,
        summary: "pseudospectral cubic term vs direct trilinear sum, 100 random 8x8 profiles",
        expected: || {
            vec![
                e(5, "max_dev_rhs_vs_oracle", Le, 1e-10),
                e(5, "max_dev_exact", Le, 1e-10),
                e(5, "max_dev_periodic", Le, 1e-10),
            ]
        },
        run: |dir, seed, _| exp::duhamel_check(Some(dir), 100, 8, 1.0, seed),
    },
    ExperimentPreset {
        name: "l2-conservation",
        criteria: &[6],
        seed: 0,
        summary: "nonlinear run at eps = 0.1 to T = 10; relative L2 drift",
        expected: || vec![e(6, "l2_relative_drift", Le, 1e-8)],
        run: |dir, _, exec| exp::l2_conservation(dir, exec),
    },
    ExperimentPreset {
        name: "decay-2-3",
        criteria: &[7, 8, 9, 10],
        seed: 0,
        summary: "eps = 0.05 bump on 512^2, box 256 pi, T = 64: decay rates, bounds, scattering",
        expected: || {
            vec![
                e(7, "linf_exponent", Ge, -0.75),
                e(7, "linf_exponent", Le, -0.58),
                e(7, "half_a_exponent", Le, -0.75),
                e(7, "grad_exponent", Le, -0.54),
                e(8, "h3_growth", Le, 1.1),
                e(8, "w_a_growth", Le, 1.1),
                e(8, "w_b_growth", Le, 1.1),
                e(8, "max_boundary_mass", Lt, 1e-6),
                e(9, "dtf_exponent", Le, -1.0),
                e(10, "increments_decreasing", Ge, 1.0),
                e(10, "tail_finite", Ge, 1.0),
            ]
        },
        run: |dir, _, exec| exp::decay(dir, &exp::decay_config(), exec),
    },
    ExperimentPreset {
        name: "cubic-scaling",
        criteria: &[11],
        seed: 0,
        summary: "profile displacement at T = 16 for eps = 0.02, 0.04, 0.08",
        expected: || {
            vec![
                e(11, "cubic_slope", Ge, 2.8),
                e(11, "cubic_slope", Le, 3.2),
            ]
        },
        run: |dir, _, exec| exp::cubic_scaling(dir, exec),
    },
    ExperimentPreset {
        name: "resonance-algebra",
        criteria: &[12],
        seed: 12,
        summary: "16 sign patterns on a rho grid plus 10^4 random points",
        expected: || {
            vec![
                e(12, "predicate_mismatches", Le, 0.0),
                e(12, "phi_all_plus_unit_error", Le, 0.0),
                e(12, "m_gradxi_relative", Le, 1e-9),
                e(12, "gradient_fd_error", Le, 1e-6),
                e(12, "off_manifold_false_space", Le, 0.0),
            ]
        },
        run: |dir, seed, _| {
            exp::resonance_algebra(Some(dir), exp::DEFAULT_RESONANCE_TOL, 10_000, seed).map(|r| r.0)
        },
    },
    ExperimentPreset {
        name: "singular-identities",
        criteria: &[13],
        seed: 13,
        summary: "three singular-solution identities on 10^4 random triples",
        expected: || {
            vec![
                e(13, "residual_triple1", Le, 1e-12),
                e(13, "residual_triple2", Le, 1e-12),
                e(13, "residual_triple3", Le, 1e-12),
            ]
        },
        run: |dir, seed, _| exp::singular_identities(Some(dir), 10_000, seed).map(|r| r.0),
    },
    ExperimentPreset {
        name: "cutoff-scaling",
        criteria: &[14],
        seed: 14,
        summary: "sampled symbol norms of the cutoff and the weighted phase derivative, s = 1, 16, 256",
        expected: || {
            vec![
                e(14, "chi_invariance_deviation", Le, 1e-9),
                e(14, "weighted_exponent_relative_error", Le, 0.1),
            ]
        },
        run: exp::cutoff,
    },
];

pub fn preset_names() -> Vec<String> {
    PRESETS.iter().map(|p| p.name.to_string()).collect()
}

pub fn find_preset(name: &str) -> Result<&'static ExperimentPreset> {
    PRESETS
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| CliError::UnknownPreset {
            name: name.to_string(),
            available: preset_names(),
        })
}

#[derive(Clone, Debug)]
pub struct RunContext {
    pub out_root: PathBuf,
    pub seed_override: Option<u64>,
    pub exec: Execution,
}

impl RunContext {
    pub fn new(out_root: impl AsRef<Path>) -> Self {
        RunContext {
            out_root: out_root.as_ref().to_path_buf(),
            seed_override: None,
            exec: Execution::default(),
        }
    }
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

/// Runs the preset, writes its outputs and `manifest.json` under
/// `<out>/<name>/<timestamp>/`, and returns the manifest. Failed expectations
/// are recorded in the manifest, not returned as errors.
pub fn run_preset(name: &str, ctx: &RunContext) -> Result<RunManifest> {
    let preset = find_preset(name)?;
    let seed = ctx.seed_override.unwrap_or(preset.seed);
    let mut dir = RunDir::create(&ctx.out_root, preset.name)?;
    let started_at = now();
    let clock = Instant::now();
    let outcome = (preset.run)(&mut dir, seed, ctx.exec).map_err(|source| CliError::Preset {
        preset: preset.name.to_string(),
        source: Box::new(source),
    })?;
    let expectations = evaluate(&preset.expected(), &outcome.metrics);
    let manifest = RunManifest {
        preset: preset.name.to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config_hash: outcome.config_hash,
        config: outcome.config,
        seed,
        threads: ctx.exec.threads(),
        started_at,
        finished_at: now(),
        wall_seconds: clock.elapsed().as_secs_f64(),
        output_dir: dir.path.clone(),
        outputs: dir.outputs.clone(),
        metrics: outcome.metrics,
        passed: expectations.iter().all(|r| r.pass),
        expectations,
    };
    manifest.write_atomic(&dir.path)?;
    Ok(manifest)
}

/// Runs several presets with at most `jobs` running at once. Results come
/// back in input order.
pub fn run_presets(names: &[String], ctx: &RunContext, jobs: usize) -> Vec<(String, Result<RunManifest>)> {
    let jobs = jobs.max(1);
    let mut results: Vec<Option<Result<RunManifest>>> = (0..names.len()).map(|_| None).collect();
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots = std::sync::Mutex::new(&mut results);
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(names.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                let Some(name) = names.get(i) else { break };
                let r = run_preset(name, ctx);
                slots.lock().expect("result lock poisoned")[i] = Some(r);
            });
        }
    });
    names
        .iter()
        .cloned()
        .zip(results.into_iter().map(|r| r.expect("every preset ran")))
        .collect()
}
