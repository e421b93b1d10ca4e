use serde::Serialize;

use super::phase::{phase, phase_gradients, PhasePoint};
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ResonanceFlags {
    pub space: bool,
    pub time: bool,
    pub space_time: bool,
}

/// Signs `(e1_a, e2_a, e1_b, e2_b)` with `eta = e1 rho` and `sigma = e2 rho`
/// componentwise.
pub type SignPattern = [i8; 4];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResonanceRecord {
    pub point: PhasePoint,
    pub phi: f64,
    pub grad_eta: [f64; 2],
    pub grad_sigma: [f64; 2],
    pub grad_xi: [f64; 2],
    pub dxi_a_phi: f64,
    pub flags: ResonanceFlags,
    /// Present for space resonances whose `rho` components are both nonzero.
    pub sign_pattern: Option<SignPattern>,
    pub tol: f64,
}

fn sign_of(u: f64, r: f64) -> i8 {
    if u * r >= 0.0 {
        1
    } else {
        -1
    }
}

/// Scale-relative classification: space iff both gradients are within
/// `tol |omega|^2`, time iff `|phi| <= tol |omega|^3`.
pub fn classify(p: &PhasePoint, tol: f64) -> Result<ResonanceRecord> {
    if !(tol > 0.0) {
        return Err(Error::arg("tol", format!("must be positive, got {tol}")));
    }
    let phi = phase(p);
    let g = phase_gradients(p);
    let scale = p.scale();
    let grad_max = g
        .eta
        .iter()
        .chain(&g.sigma)
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let space = grad_max <= tol * scale * scale;
    let time = phi.abs() <= tol * scale * scale * scale;
    let r = p.rho();
    let rho_zero = |c: usize| r[c].abs() <= tol * scale;
    let sign_pattern = (space && !rho_zero(0) && !rho_zero(1)).then(|| {
        [
            sign_of(p.eta[0], r[0]),
            sign_of(p.sigma[0], r[0]),
            sign_of(p.eta[1], r[1]),
            sign_of(p.sigma[1], r[1]),
        ]
    });
    Ok(ResonanceRecord {
        point: *p,
        phi,
        grad_eta: g.eta,
        grad_sigma: g.sigma,
        grad_xi: g.xi,
        dxi_a_phi: g.xi[0],
        flags: ResonanceFlags {
            space,
            time,
            space_time: space && time,
        },
        sign_pattern,
        tol,
    })
}

/// Closed-form characterization of which space resonances are also time
/// resonances: either each block has a minus sign or a vanishing `rho`
/// component, or all signs are plus and `rho_a + rho_b = 0`.
///
/// Blocks with a vanishing `rho` component count as all-plus; their signs
/// never affect the outcome.
pub fn resonance_predicate(record: &ResonanceRecord) -> Result<bool> {
    if !record.flags.space {
        return Err(Error::NotSpaceResonant);
    }
    let p = &record.point;
    let r = p.rho();
    let eps = record.tol * p.scale();
    let zero = |v: f64| v.abs() <= eps;
    let signs = [
        if zero(r[0]) { 1 } else { sign_of(p.eta[0], r[0]) },
        if zero(r[0]) { 1 } else { sign_of(p.sigma[0], r[0]) },
        if zero(r[1]) { 1 } else { sign_of(p.eta[1], r[1]) },
        if zero(r[1]) { 1 } else { sign_of(p.sigma[1], r[1]) },
    ];
    let mixed_a = signs[0] == -1 || signs[1] == -1 || zero(r[0]);
    let mixed_b = signs[2] == -1 || signs[3] == -1 || zero(r[1]);
    let all_plus = signs.iter().all(|&s| s == 1);
    Ok((mixed_a && mixed_b) || (all_plus && zero(r[0] + r[1])))
}

/// Result of [`m_gradxi_vanishing`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MGradXi {
    pub n_records: usize,
    /// `max |(xi_a + xi_b) grad_xi phi|`
    pub max_abs: f64,
    /// Same, divided by `|omega|^4` per record.
    pub max_relative: f64,
}

/// Size of `(xi_a + xi_b) grad_xi phi` over the space-time resonant records.
pub fn m_gradxi_vanishing(records: &[ResonanceRecord]) -> MGradXi {
    let mut out = MGradXi {
        n_records: 0,
        max_abs: 0.0,
        max_relative: 0.0,
    };
    for r in records.iter().filter(|r| r.flags.space_time) {
        let m = r.point.xi[0] + r.point.xi[1];
        let v = (m * r.grad_xi[0]).abs().max((m * r.grad_xi[1]).abs());
        let s4 = r.point.scale().powi(4);
        out.n_records += 1;
        out.max_abs = out.max_abs.max(v);
        if s4 > 0.0 {
            out.max_relative = out.max_relative.max(v / s4);
        }
    }
    out
}
