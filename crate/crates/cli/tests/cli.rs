use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command as Process;

use clap::Parser;
use mzk_cli::commands::{run, Cli, Command};
use mzk_cli::config::{parse_config, parse_config_str};
use mzk_cli::manifest::RunManifest;
use mzk_cli::presets::{find_preset, run_preset, RunContext};
use mzk_cli::CliError;
use serde_json::Value;

const MINIMAL: &str = r#"{
    "grid": {"n_a": 256, "n_b": 256, "len_a": 402.1238596594935, "len_b": 402.1238596594935},
    "ic": {"kind": "gaussian", "width": 1.0},
    "epsilon": 0.05,
    "t_end": 64.0
}"#;

fn with(key: &str, value: Value) -> String {
    let mut v: Value = serde_json::from_str(MINIMAL).unwrap();
    let mut slot = &mut v;
    let parts: Vec<&str> = key.split('.').collect();
    for p in &parts[..parts.len() - 1] {
        slot = &mut slot[*p];
    }
    slot[parts[parts.len() - 1]] = value;
    v.to_string()
}

#[test]
fn minimal_config_takes_defaults() {
    let cfg = parse_config_str(MINIMAL).unwrap();
    assert_eq!(cfg.grid.n_a, 256);
    assert_eq!(cfg.grid.dealias_fraction, 1.0);
    assert_eq!(cfg.t_start, 1.0);
    assert_eq!(cfg.epsilon, 0.05);
    assert!(!cfg.linear_only);
}

#[test]
fn invalid_configs_are_rejected() {
    assert!(parse_config_str(&with("grid.dealias_fraction", 1.5.into())).is_err());
    assert!(parse_config_str(&with("grid.n_a", 100.into())).is_err());
    assert!(parse_config_str(&with("epsilon", (-1.0).into())).is_err());
    assert!(parse_config_str(&with("t_end", 0.5.into())).is_err());
    assert!(parse_config_str(&with("bogus", 1.into())).is_err());
    assert!(parse_config_str(&with("ic.bogus", 1.into())).is_err());
}

#[test]
fn config_errors_name_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, with("grid.n_a", 100.into())).unwrap();
    match parse_config(&path) {
        Err(CliError::Config { path: p, .. }) => assert_eq!(p, path),
        other => panic!("{other:?}"),
    }
}

#[test]
fn unknown_preset_lists_names() {
    let Err(err) = find_preset("nope") else { panic!("found") };
    let err = err.to_string();
    assert!(err.contains("nope") && err.contains("decay-2-3"));
}

#[test]
fn clap_parsing() {
    let cli = Cli::try_parse_from(["mzk", "--jobs", "3", "--seed", "9", "preset", "--all"]).unwrap();
    assert_eq!(cli.jobs, 3);
    assert_eq!(cli.seed, Some(9));
    assert!(matches!(cli.command, Command::Preset(ref a) if a.all && a.name.is_none()));

    let cli = Cli::try_parse_from(["mzk", "decay-fit", "n.csv", "--metric", "grad", "--window", "2", "32"]).unwrap();
    match cli.command {
        Command::DecayFit { metric, window, .. } => {
            assert_eq!(metric, "grad");
            assert_eq!(window, vec![2.0, 32.0]);
        }
        other => panic!("{other:?}"),
    }
    assert!(Cli::try_parse_from(["mzk", "preset", "x", "--all"]).is_err());
    assert!(Cli::try_parse_from(["mzk", "frobnicate"]).is_err());
}

fn files_under(root: &Path, name: &str) -> Vec<PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else if p.file_name().unwrap() == name {
                out.push(p);
            }
        }
    }
    out
}

#[test]
fn presets_are_bit_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let ctx = RunContext::new(dir.path());
    for (name, csv) in [("duhamel-oracle", "duhamel.csv"), ("linear-unitarity", "unitarity.csv")] {
        let a = run_preset(name, &ctx).unwrap();
        let b = run_preset(name, &ctx).unwrap();
        assert_ne!(a.output_dir, b.output_dir);
        assert_eq!(a.config_hash, b.config_hash);
        assert_eq!(a.metrics, b.metrics);
        let read = |m: &RunManifest| fs::read(m.output_dir.join(csv)).unwrap();
        assert_eq!(read(&a), read(&b));
        assert!(a.passed, "{name}: {:?}", a.failures().collect::<Vec<_>>());
    }
    assert!(files_under(dir.path(), ".manifest.json.tmp").is_empty());
    assert_eq!(files_under(dir.path(), "manifest.json").len(), 4);
}

#[test]
fn seed_override_changes_random_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let mut ctx = RunContext::new(dir.path());
    let a = run_preset("duhamel-oracle", &ctx).unwrap();
    ctx.seed_override = Some(99);
    let b = run_preset("duhamel-oracle", &ctx).unwrap();
    assert_eq!(b.seed, 99);
    assert_ne!(a.metrics, b.metrics);
}

fn invoke(args: &[&str]) -> (bool, String) {
    let cli = Cli::try_parse_from(args).unwrap();
    let mut out = Vec::new();
    let ok = run(&cli, &mut out).unwrap();
    (ok, String::from_utf8(out).unwrap())
}

#[test]
fn simulate_then_report_and_fit() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let config = serde_json::json!({
        "grid": {"n_a": 64, "n_b": 64, "len_a": 100.0, "len_b": 100.0},
        "ic": {"kind": "band_limited_gaussian", "width": 1.0, "k_pass": 1.0, "k_stop": 1.6},
        "epsilon": 0.1,
        "t_end": 8.0,
        "boundary_mass_threshold": 1.0,
        "output_times": [1.5, 2.0, 3.0, 4.0, 6.0]
    });
    fs::write(&cfg, config.to_string()).unwrap();
    let out_root = dir.path().join("out");
    let (c, o) = (cfg.to_str().unwrap(), out_root.to_str().unwrap());

    let (ok, text) = invoke(&["mzk", "--config", c, "--out", o, "simulate"]);
    assert!(ok);
    let summary: Value = serde_json::from_str(&text).unwrap();
    let run_dir = PathBuf::from(summary["output_dir"].as_str().unwrap());
    let norms_csv = run_dir.join("norms.csv");
    assert!(norms_csv.exists() && run_dir.join("config.json").exists());

    let (_, replayed) = invoke(&["mzk", "--config", c, "report", run_dir.to_str().unwrap()]);
    let stored = fs::read_to_string(&norms_csv).unwrap();
    assert_eq!(replayed.lines().count(), stored.lines().count());
    assert_eq!(replayed.lines().next(), stored.lines().next());

    let (_, fit) = invoke(&["mzk", "decay-fit", norms_csv.to_str().unwrap(), "--window", "1", "8"]);
    let fit: Value = serde_json::from_str(&fit).unwrap();
    assert_eq!(fit["metric"], "linf");
    assert_eq!(fit["n_points"], 7);
    assert!(fit["exponent"].as_f64().unwrap() < 0.0);

    let (_, scatter) = invoke(&["mzk", "--config", c, "scatter-report", run_dir.to_str().unwrap(), "--window", "1", "8"]);
    let scatter: Value = serde_json::from_str(&scatter).unwrap();
    assert_eq!(scatter["pairs"].as_array().unwrap().len(), 3);
}

#[test]
fn small_commands_print_results() {
    let dir = tempfile::tempdir().unwrap();
    let o = dir.path().to_str().unwrap();
    let (_, json) = invoke(&["mzk", "--out", o, "identity-check", "--n", "1000"]);
    let v: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["n_samples"], 1000);

    let (_, json) = invoke(&["mzk", "--out", o, "resonance-scan", "--n-random", "100"]);
    let v: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["n_predicate_mismatches"], 0);

    let (_, csv) = invoke(&["mzk", "--out", o, "airy-check", "--t", "1", "--x-max", "5"]);
    let mut rows = csv::Reader::from_reader(csv.as_bytes());
    let header = rows.headers().unwrap().clone();
    let col = header.iter().position(|h| h == "max_abs_error").unwrap();
    let records: Vec<csv::StringRecord> = rows.records().map(|r| r.unwrap()).collect();
    assert_eq!(records.len(), 1);
    assert!(records[0][col].parse::<f64>().unwrap() <= 1e-6);

    let (ok, list) = invoke(&["mzk", "preset", "--list"]);
    assert!(ok && list.contains("cubic-scaling"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_mzk");
    let status = Process::new(bin).args(["preset", "--list"]).status().unwrap();
    assert_eq!(status.code(), Some(0));
    let out = Process::new(bin).args(["preset", "nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown preset"));
}
