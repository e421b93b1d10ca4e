use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mzk_core::resonance::{sampled_symbol_norm, weighted_phase_symbol, SymbolGrid};
use mzk_core::solver::{nonlinear_rhs, RunConfig, Solver};
use mzk_core::spectral::{evaluate_ic, Frame, Grid, GridSpec, InitialCondition};
use mzk_core::Execution;

const POLICIES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn bump() -> InitialCondition {
    InitialCondition::BandLimitedGaussian {
        width: 1.0,
        k_pass: 1.0,
        k_stop: 1.6,
        center: [0.0, 0.0],
    }
}

fn fft(c: &mut Criterion) {
    let mut group = c.benchmark_group("fft_round_trip");
    for n in [256, 512] {
        for (name, exec) in POLICIES {
            let grid = Grid::with_execution(GridSpec::square(n, n as f64 * PI / 2.0), exec).unwrap();
            let field = evaluate_ic(&bump(), 0.05, &grid, Frame::Ab).unwrap();
            group.bench_with_input(BenchmarkId::new(name, n), &field, |b, f| {
                b.iter(|| grid.inverse(&grid.forward(black_box(f)).unwrap()).unwrap())
            });
        }
    }
    group.finish();
}

fn cubic_term(c: &mut Criterion) {
    let mut group = c.benchmark_group("cubic_term");
    for (name, exec) in POLICIES {
        let grid = Grid::with_execution(GridSpec::square(256, 128.0 * PI), exec).unwrap();
        let sf = grid.forward(&evaluate_ic(&bump(), 0.05, &grid, Frame::Ab).unwrap()).unwrap();
        group.bench_function(name, |b| b.iter(|| nonlinear_rhs(&grid, black_box(&sf)).unwrap()));
    }
    group.finish();
}

fn step(c: &mut Criterion) {
    let mut group = c.benchmark_group("if_rk4_step");
    group.sample_size(20);
    for (name, exec) in POLICIES {
        let cfg = RunConfig::new(GridSpec::square(256, 128.0 * PI), bump(), 0.05, 2.0);
        let solver = Solver::with_execution(cfg, exec).unwrap();
        let state = solver.initial_state().unwrap();
        let h = solver.step_limit(&state);
        group.bench_function(name, |b| b.iter(|| solver.step(black_box(&state), h).unwrap()));
    }
    group.finish();
}

fn symbol_norm(c: &mut Criterion) {
    let mut group = c.benchmark_group("sampled_symbol_norm");
    group.sample_size(10);
    let grid = SymbolGrid::random(8, SymbolGrid::geometric_radii(-24, 8, 4), vec![1.0, 2f64.sqrt()], 14);
    for (name, exec) in POLICIES {
        group.bench_function(name, |b| {
            b.iter(|| sampled_symbol_norm(weighted_phase_symbol(16.0), 2, black_box(&grid), exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, fft, cubic_term, step, symbol_norm);
criterion_main!(benches);
