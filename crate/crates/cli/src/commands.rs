//! Argument parsing and subcommand dispatch for the `mzk` binary.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use mzk_core::diagnostics::{decay_fit, scattering_report, NormReport};
use mzk_core::solver::{RunConfig, Solver};
use mzk_core::spectral::snapshot::read_snapshot;
use mzk_core::Execution;
use serde::Serialize;
use serde_json::json;

use crate::config::parse_config;
use crate::error::{CliError, Result};
use crate::experiments as exp;
use crate::manifest::RunManifest;
use crate::output::{read_norms_csv, RunDir};
use crate::presets::{preset_names, run_presets, RunContext, PRESETS};

#[derive(Debug, Parser)]
#[command(name = "mzk", version, about = "Modified Zakharov-Kuznetsov solver and verification presets")]
pub struct Cli {
    /// JSON run configuration (simulate, report).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Root directory for run outputs.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Presets run concurrently.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Overrides the seed of seeded experiments.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Disable data-parallel loops.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the config and write norms.csv plus a snapshot per output time.
    Simulate,
    /// Recompute one norm row per snapshot of a simulate run directory.
    Report {
        run_dir: PathBuf,
    },
    /// Power-law fit of one norms.csv column.
    DecayFit {
        norms_csv: PathBuf,
        #[arg(long, default_value = "linf")]
        metric: String,
        #[arg(long, num_args = 2, default_values_t = [1.0, 64.0])]
        window: Vec<f64>,
    },
    /// Dyadic profile increments and tail estimate for a simulate run directory.
    ScatterReport {
        run_dir: PathBuf,
        #[arg(long, num_args = 2, default_values_t = [4.0, 64.0])]
        window: Vec<f64>,
    },
    /// Spectral vs closed-form Airy kernel.
    AiryCheck {
        #[arg(long, value_delimiter = ',', default_values_t = [1.0, 8.0])]
        t: Vec<f64>,
        #[arg(long, default_value_t = 20.0)]
        x_max: f64,
    },
    /// Weak-L^p quasi-norms of the kernel and their scaling in t.
    KernelWeaklp {
        #[arg(long, value_delimiter = ',', default_values_t = [4.0, 6.0])]
        p: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [1.0, 8.0, 64.0])]
        t: Vec<f64>,
    },
    /// Sign-pattern and random-point scan of the resonant sets.
    ResonanceScan {
        #[arg(long, default_value_t = exp::DEFAULT_RESONANCE_TOL)]
        tol: f64,
        #[arg(long, default_value_t = 10_000)]
        n_random: usize,
    },
    /// Residuals of the singular-solution identities.
    IdentityCheck {
        #[arg(long, default_value_t = 10_000)]
        n: usize,
    },
    /// Max relative deviation between the pseudospectral and direct cubic terms.
    DuhamelOracle {
        #[arg(long, default_value_t = 100)]
        profiles: usize,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
    },
    /// Run named presets.
    Preset(PresetArgs),
}

#[derive(Debug, Args)]
pub struct PresetArgs {
    pub name: Option<String>,
    #[arg(long, conflicts_with = "name")]
    pub all: bool,
    #[arg(long, conflicts_with_all = ["name", "all"])]
    pub list: bool,
}

impl Cli {
    fn exec(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::default()
        }
    }

    fn context(&self) -> RunContext {
        RunContext {
            out_root: self.out.clone(),
            seed_override: self.seed,
            exec: self.exec(),
        }
    }

    fn require_config(&self) -> Result<RunConfig> {
        let path = self
            .config
            .as_ref()
            .ok_or_else(|| CliError::Usage("--config <path> is required".into()))?;
        parse_config(path)
    }
}

fn print_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn print_file(out: &mut dyn Write, dir: &RunDir, rel: &str) -> Result<()> {
    out.write_all(&fs::read(dir.path.join(rel))?)?;
    Ok(())
}

fn norm_column(name: &str) -> Result<fn(&NormReport) -> f64> {
    Ok(match name {
        "l2" => |r| r.l2,
        "h3" => |r| r.h3,
        "linf" => |r| r.linf,
        "linf_grad" | "grad" => |r| r.linf_grad,
        "linf_half_a" | "half_a" => |r| r.linf_half_a,
        "linf_half_b" | "half_b" => |r| r.linf_half_b,
        "w_a" => |r| r.w_a,
        "w_b" => |r| r.w_b,
        "dtf_h2" => |r| r.dtf_h2,
        other => return Err(CliError::Usage(format!("unknown norm column `{other}`"))),
    })
}

/// Snapshots of a run directory, sorted by time.
fn load_snapshots(run_dir: &Path) -> Result<Vec<mzk_core::spectral::Field>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(run_dir.join("snapshots"))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "mzkf"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| Ok(read_snapshot(std::io::BufReader::new(fs::File::open(p)?))?))
        .collect()
}

fn run_config_of(run_dir: &Path, explicit: Option<&Path>) -> Result<RunConfig> {
    parse_config(explicit.unwrap_or(&run_dir.join("config.json")))
}

/// Rebuilds states and norms from the snapshots of a simulate run.
fn replay(
    run_dir: &Path,
    explicit: Option<&Path>,
    exec: Execution,
) -> Result<(Solver, Vec<mzk_core::linear::ProfileSnapshot>, Vec<NormReport>)> {
    let solver = Solver::with_execution(run_config_of(run_dir, explicit)?, exec)?;
    let mut profiles = Vec::new();
    let mut norms = Vec::new();
    for field in load_snapshots(run_dir)? {
        let state = solver.state_from_spectral(solver.grid().forward(&field)?)?;
        let point = solver.record(&state)?;
        profiles.push(point.profile);
        norms.push(point.norms);
    }
    Ok((solver, profiles, norms))
}

fn simulate(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let cfg = cli.require_config()?;
    let solver = Solver::with_execution(cfg.clone(), cli.exec())?;
    let mut dir = RunDir::create(&cli.out, "simulate")?;
    dir.write_json("config.json", &cfg)?;
    let mut norms = Vec::new();
    let mut snapshots = Vec::new();
    let steps = solver.simulate_with(|p| {
        norms.push(p.norms);
        snapshots.push(p.state.field);
        Ok(())
    })?;
    for f in &snapshots {
        dir.write_snapshot(f)?;
    }
    dir.write_csv("norms.csv", &norms)?;
    print_json(
        out,
        &json!({
            "output_dir": dir.path,
            "config_hash": solver.config_hash(),
            "steps": steps,
            "outputs": dir.outputs,
        }),
    )
}

fn preset(cli: &Cli, args: &PresetArgs, out: &mut dyn Write) -> Result<bool> {
    if args.list {
        for p in PRESETS {
            let criteria: Vec<String> = p.criteria.iter().map(u8::to_string).collect();
            writeln!(out, "{:<20} criteria {:<10} {}", p.name, criteria.join(","), p.summary)?;
        }
        return Ok(true);
    }
    let names = match (&args.name, args.all) {
        (Some(n), false) => vec![n.clone()],
        (None, true) => preset_names(),
        _ => return Err(CliError::Usage("give a preset name, --all or --list".into())),
    };
    if let Some(n) = &args.name {
        crate::presets::find_preset(n)?;
    }
    let mut all_pass = true;
    for (name, result) in run_presets(&names, &cli.context(), cli.jobs) {
        match result {
            Ok(m) => {
                all_pass &= m.passed;
                report_manifest(out, &m)?;
            }
            Err(e) => {
                all_pass = false;
                writeln!(out, "{name}: ERROR {e}")?;
            }
        }
    }
    Ok(all_pass)
}

fn report_manifest(out: &mut dyn Write, m: &RunManifest) -> Result<()> {
    writeln!(
        out,
        "{}: {} ({:.1} s) {}",
        m.preset,
        if m.passed { "PASS" } else { "FAIL" },
        m.wall_seconds,
        m.output_dir.display()
    )?;
    for r in &m.expectations {
        let value = r.value.map_or("missing".to_string(), |v| format!("{v:.6e}"));
        writeln!(
            out,
            "  [{}] criterion {:>2} {} = {} {} {:e}",
            if r.pass { "pass" } else { "FAIL" },
            r.expectation.criterion,
            r.expectation.metric,
            value,
            r.expectation.comparator.symbol(),
            r.expectation.threshold
        )?;
    }
    Ok(())
}

/// Executes a parsed command line. Returns `false` when a preset expectation
/// failed.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<bool> {
    let exec = cli.exec();
    let seed = cli.seed.unwrap_or(0);
    match &cli.command {
        Command::Simulate => simulate(cli, out)?,
        Command::Report { run_dir } => {
            let (_, _, norms) = replay(run_dir, cli.config.as_deref(), exec)?;
            out.write_all(crate::output::csv_string(&norms)?.as_bytes())?;
        }
        Command::DecayFit {
            norms_csv,
            metric,
            window,
        } => {
            let column = norm_column(metric)?;
            let norms = read_norms_csv(norms_csv)?;
            let series: Vec<(f64, f64)> = norms.iter().map(|r| (r.t, column(r))).collect();
            let fit = decay_fit(&series, (window[0], window[1]))?;
            print_json(
                out,
                &json!({
                    "metric": metric,
                    "exponent": fit.exponent,
                    "intercept": fit.intercept,
                    "r2": fit.r_squared,
                    "window": fit.window,
                    "n_points": fit.n_points,
                }),
            )?;
        }
        Command::ScatterReport { run_dir, window } => {
            let (solver, profiles, norms) = replay(run_dir, cli.config.as_deref(), exec)?;
            let dyadic: Vec<_> = profiles
                .into_iter()
                .filter(|p| (p.time.log2() - p.time.log2().round()).abs() < 1e-9)
                .collect();
            let report = scattering_report(solver.grid(), &dyadic, &norms, (window[0], window[1]))?;
            print_json(out, &report)?;
        }
        Command::AiryCheck { t, x_max } => {
            let mut dir = RunDir::create(&cli.out, "airy-check")?;
            let outcome = exp::airy_crosscheck(&mut dir, t, *x_max)?;
            print_file(out, &dir, "airy.csv")?;
            eprintln!("{}", serde_json::to_string(&outcome.metrics)?);
        }
        Command::KernelWeaklp { p, t } => {
            let mut dir = RunDir::create(&cli.out, "kernel-weaklp")?;
            let outcome = exp::kernel_weaklp(&mut dir, p, t, exec)?;
            print_file(out, &dir, "weaklp.csv")?;
            eprintln!("{}", serde_json::to_string(&outcome.metrics)?);
        }
        Command::ResonanceScan { tol, n_random } => {
            let (_, report) = exp::resonance_algebra(None, *tol, *n_random, seed)?;
            print_json(out, &report)?;
        }
        Command::IdentityCheck { n } => {
            let (_, report) = exp::singular_identities(None, *n, seed)?;
            print_json(out, &report)?;
        }
        Command::DuhamelOracle { profiles, n, s } => {
            let outcome = exp::duhamel_check(None, *profiles, *n, *s, seed)?;
            let worst = outcome.metrics.values().copied().fold(0.0f64, f64::max);
            writeln!(out, "max_relative_deviation {worst:e}")?;
            for (k, v) in &outcome.metrics {
                writeln!(out, "{k} {v:e}")?;
            }
        }
        Command::Preset(args) => return preset(cli, args, out),
    }
    Ok(true)
}
