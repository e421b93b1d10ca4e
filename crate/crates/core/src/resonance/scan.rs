use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::classify::{classify, m_gradxi_vanishing, resonance_predicate, ResonanceRecord};
use super::phase::{phase, PhasePoint};
use crate::error::Result;

/// The sixteen sign patterns `(e1_a, e2_a, e1_b, e2_b)`.
pub fn sign_patterns() -> Vec<[i8; 4]> {
    (0..16u8)
        .map(|bits| {
            let s = |k: u8| if bits & (1 << k) == 0 { 1 } else { -1 };
            [s(0), s(1), s(2), s(3)]
        })
        .collect()
}

/// Space-resonant point `eta = e1 rho`, `sigma = e2 rho` componentwise.
pub fn resonant_point(rho: [f64; 2], signs: [i8; 4]) -> PhasePoint {
    let e = signs.map(f64::from);
    PhasePoint::from_rho(
        [e[0] * rho[0], e[2] * rho[1]],
        [e[1] * rho[0], e[3] * rho[1]],
        rho,
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OffManifoldScan {
    pub n_random: usize,
    /// Random points flagged space-resonant although some `|eta_c| != |rho_c|`
    /// or `|sigma_c| != |rho_c|` beyond tolerance.
    pub n_random_false_space: usize,
    pub n_perturbed: usize,
    /// Points pushed off the manifold by 10x the classification threshold that
    /// were still flagged space-resonant.
    pub n_perturbed_false_space: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub n_points: usize,
    pub n_space: usize,
    pub n_time: usize,
    pub n_space_time: usize,
    pub n_predicate_mismatches: usize,
    /// Scale-relative `max |(xi_a + xi_b) grad_xi phi| / |omega|^4`.
    pub max_m_gradxi_on_resonances: f64,
    pub max_m_gradxi_abs: f64,
    /// `phi` at `eta = sigma = rho = (1, 0)`.
    pub phi_all_plus_unit: f64,
    pub off_manifold: OffManifoldScan,
    pub tol: f64,
}

/// Exhaustive scan over `rho_grid` x 16 sign patterns plus a seeded random
/// off-manifold scan of `n_random` points.
pub fn resonance_scan(rho_grid: &[[f64; 2]], tol: f64, n_random: usize, seed: u64) -> Result<ScanReport> {
    let mut records: Vec<ResonanceRecord> = Vec::new();
    let mut mismatches = 0;
    for &rho in rho_grid {
        for signs in sign_patterns() {
            let rec = classify(&resonant_point(rho, signs), tol)?;
            if !rec.flags.space {
                mismatches += 1;
            } else if rec.flags.time != resonance_predicate(&rec)? {
                mismatches += 1;
            }
            records.push(rec);
        }
    }
    let count = |f: fn(&ResonanceRecord) -> bool| records.iter().filter(|r| f(r)).count();
    let m = m_gradxi_vanishing(&records);
    let unit = PhasePoint::from_rho([1.0, 0.0], [1.0, 0.0], [1.0, 0.0]);
    Ok(ScanReport {
        n_points: records.len(),
        n_space: count(|r| r.flags.space),
        n_time: count(|r| r.flags.time),
        n_space_time: count(|r| r.flags.space_time),
        n_predicate_mismatches: mismatches,
        max_m_gradxi_on_resonances: m.max_relative,
        max_m_gradxi_abs: m.max_abs,
        phi_all_plus_unit: phase(&unit),
        off_manifold: off_manifold_scan(tol, n_random, seed)?,
        tol,
    })
}

fn off_manifold_scan(tol: f64, n: usize, seed: u64) -> Result<OffManifoldScan> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = OffManifoldScan {
        n_random: n,
        n_random_false_space: 0,
        n_perturbed: n,
        n_perturbed_false_space: 0,
    };
    for _ in 0..n {
        let mut v = [0.0; 6];
        v.iter_mut().for_each(|x| *x = rng.gen_range(-5.0..5.0));
        let p = PhasePoint::from_vars(&v);
        let rec = classify(&p, tol)?;
        if rec.flags.space {
            let r = p.rho();
            let scale = p.scale();
            let off = (0..2).any(|c| {
                (p.eta[c].abs() - r[c].abs()).abs() > tol * scale
                    || (p.sigma[c].abs() - r[c].abs()).abs() > tol * scale
            });
            if off {
                out.n_random_false_space += 1;
            }
        }

        let rho = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
        let signs = [0, 1, 2, 3].map(|_| if rng.gen_bool(0.5) { 1 } else { -1 });
        let base = resonant_point(rho, signs);
        let scale = base.scale();
        // Shift eta_a so |d_{eta_a} phi| = 3 |rho_a^2 - eta_a^2| is ten times
        // the threshold; xi moves with eta to keep rho fixed.
        let target = 10.0 * tol * scale * scale / 3.0;
        let eta_a = (rho[0] * rho[0] + target).sqrt() * f64::from(signs[0]);
        let p = PhasePoint::from_rho([eta_a, base.eta[1]], base.sigma, rho);
        if classify(&p, tol)?.flags.space {
            out.n_perturbed_false_space += 1;
        }
    }
    Ok(out)
}
