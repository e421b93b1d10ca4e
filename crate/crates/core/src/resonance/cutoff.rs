use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::phase::{phase_gradients, PhasePoint};
use crate::error::{Error, Result};
use crate::exec::Execution;

/// `C^2` bump: 1 on `[-1, 1]`, 0 outside `(-2, 2)`, quintic smoothstep between.
pub fn chi0(r: f64) -> f64 {
    let u = r.abs() - 1.0;
    if u <= 0.0 {
        1.0
    } else if u >= 1.0 {
        0.0
    } else {
        1.0 - u * u * u * (10.0 - 15.0 * u + 6.0 * u * u)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CutoffSample {
    pub s: f64,
    pub value: f64,
    /// `|omega_a| / |omega_b|`
    pub ratio: f64,
}

/// `chi(s, omega) = chi0(s^{1/4} |omega_a| / |omega_b|)`.
pub fn cutoff_chi(s: f64, p: &PhasePoint) -> Result<CutoffSample> {
    if !(s > 0.0) {
        return Err(Error::arg("s", format!("must be positive, got {s}")));
    }
    let nb = p.norm_b();
    if nb == 0.0 {
        return Err(Error::arg("point", "omega_b = 0"));
    }
    let ratio = p.norm_a() / nb;
    Ok(CutoffSample {
        s,
        value: chi0(s.powf(0.25) * ratio),
        ratio,
    })
}

/// Sample points `omega_a = r_a u_a`, `omega_b = r_b u_b` over unit directions
/// `u` in the `(xi, eta, sigma)` variables of each block and the given radii.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolGrid {
    pub dirs_a: Vec<[f64; 3]>,
    pub dirs_b: Vec<[f64; 3]>,
    pub radii_a: Vec<f64>,
    pub radii_b: Vec<f64>,
}

fn random_dirs(rng: &mut ChaCha8Rng, n: usize) -> Vec<[f64; 3]> {
    (0..n)
        .map(|_| loop {
            let v: [f64; 3] = [0; 3].map(|_| rng.gen_range(-1.0..1.0));
            let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if r > 0.1 && r <= 1.0 {
                break v.map(|x| x / r);
            }
        })
        .collect()
}

impl SymbolGrid {
    pub fn random(n_dirs: usize, radii_a: Vec<f64>, radii_b: Vec<f64>, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        SymbolGrid {
            dirs_a: random_dirs(&mut rng, n_dirs),
            dirs_b: random_dirs(&mut rng, n_dirs),
            radii_a,
            radii_b,
        }
    }

    /// Geometric radii `2^{k / per_octave}` for `k` in `k_lo..=k_hi`.
    pub fn geometric_radii(k_lo: i32, k_hi: i32, per_octave: u32) -> Vec<f64> {
        (k_lo..=k_hi)
            .map(|k| 2f64.powf(k as f64 / per_octave as f64))
            .collect()
    }

    /// Same directions with `radii_a` scaled by `s^{-1/4}`.
    pub fn matched(&self, s: f64) -> Self {
        let f = s.powf(-0.25);
        SymbolGrid {
            radii_a: self.radii_a.iter().map(|r| r * f).collect(),
            ..self.clone()
        }
    }

    pub fn len(&self) -> usize {
        self.dirs_a.len() * self.dirs_b.len() * self.radii_a.len() * self.radii_b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn point(&self, idx: usize) -> [f64; 6] {
        let nrb = self.radii_b.len();
        let nra = self.radii_a.len();
        let ndb = self.dirs_b.len();
        let rb = self.radii_b[idx % nrb];
        let idx = idx / nrb;
        let ra = self.radii_a[idx % nra];
        let idx = idx / nra;
        let ub = self.dirs_b[idx % ndb];
        let ua = self.dirs_a[idx / ndb];
        [
            ra * ua[0],
            ra * ua[1],
            ra * ua[2],
            rb * ub[0],
            rb * ub[1],
            rb * ub[2],
        ]
    }
}

const FD_STEP: f64 = 1e-3;

/// Finite-order sampled surrogate of a two-block symbol norm: max over samples
/// and multi-indices `(alpha, beta)`, `|alpha| + |beta| <= max_order`, of
/// `|omega_a|^{|alpha|} |omega_b|^{|beta|} |d^alpha_a d^beta_b m|`. Derivatives are
/// central differences with steps proportional to the block norms.
pub fn sampled_symbol_norm<F>(symbol: F, max_order: usize, grid: &SymbolGrid, exec: Execution) -> Result<f64>
where
    F: Fn(&PhasePoint) -> f64 + Sync + Send,
{
    if max_order > 2 {
        return Err(Error::arg("max_order", format!("at most 2, got {max_order}")));
    }
    let eval = |v: &[f64; 6]| symbol(&PhasePoint::from_vars(v));
    let per_point = exec.map(grid.len(), |idx| {
        let x = grid.point(idx);
        let p = PhasePoint::from_vars(&x);
        let (na, nb) = (p.norm_a(), p.norm_b());
        let step = |k: usize| if k < 3 { FD_STEP * na } else { FD_STEP * nb };
        let weight = |k: usize| if k < 3 { na } else { nb };
        let shifted = |moves: &[(usize, f64)]| {
            let mut y = x;
            for &(k, d) in moves {
                y[k] += d;
            }
            eval(&y)
        };
        let f0 = eval(&x);
        let mut best = f0.abs();
        if max_order >= 1 {
            for k in 0..6 {
                let h = step(k);
                if h == 0.0 {
                    continue;
                }
                let d = (shifted(&[(k, h)]) - shifted(&[(k, -h)])) / (2.0 * h);
                best = best.max(weight(k) * d.abs());
            }
        }
        if max_order >= 2 {
            for k in 0..6 {
                for l in k..6 {
                    let (hk, hl) = (step(k), step(l));
                    if hk == 0.0 || hl == 0.0 {
                        continue;
                    }
                    let d = if k == l {
                        (shifted(&[(k, hk)]) - 2.0 * f0 + shifted(&[(k, -hk)])) / (hk * hk)
                    } else {
                        (shifted(&[(k, hk), (l, hl)]) - shifted(&[(k, hk), (l, -hl)])
                            - shifted(&[(k, -hk), (l, hl)])
                            + shifted(&[(k, -hk), (l, -hl)]))
                            / (4.0 * hk * hl)
                    };
                    best = best.max(weight(k) * weight(l) * d.abs());
                }
            }
        }
        best
    });
    let out = per_point.into_iter().fold(0.0f64, f64::max);
    if !out.is_finite() {
        return Err(Error::NonFinite("sampled symbol norm"));
    }
    Ok(out)
}

/// `chi(s, omega)`, zero where `omega_b = 0`.
pub fn chi_symbol(s: f64) -> impl Fn(&PhasePoint) -> f64 + Sync + Send {
    let q = s.powf(0.25);
    move |p: &PhasePoint| {
        let nb = p.norm_b();
        if nb == 0.0 {
            0.0
        } else {
            chi0(q * p.norm_a() / nb)
        }
    }
}

/// `|omega_b|^{-2} d_{xi_a} phi chi(s, omega)`.
pub fn weighted_phase_symbol(s: f64) -> impl Fn(&PhasePoint) -> f64 + Sync + Send {
    let chi = chi_symbol(s);
    move |p: &PhasePoint| {
        let nb = p.norm_b();
        if nb == 0.0 {
            return 0.0;
        }
        let c = chi(p);
        if c == 0.0 {
            0.0
        } else {
            phase_gradients(p).xi[0] * c / (nb * nb)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutoffScalingRow {
    pub s: f64,
    /// Sampled norm of `chi(s)` on the grid matched to `s`.
    pub chi_norm_matched: f64,
    /// Sampled norm of `chi(1)` on the base grid.
    pub chi_norm_reference: f64,
    /// Sampled norm of `|omega_b|^{-2} d_{xi_a} phi chi(s)` on the base grid.
    pub weighted_norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutoffScalingReport {
    pub rows: Vec<CutoffScalingRow>,
    /// `max |matched - reference|` over the rows.
    pub max_invariance_deviation: f64,
    /// Fitted exponent of `weighted_norm` against `s`.
    pub weighted_exponent: f64,
}

pub fn cutoff_scaling(ss: &[f64], grid: &SymbolGrid, exec: Execution) -> Result<CutoffScalingReport> {
    if ss.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            got: ss.len(),
        });
    }
    let reference = sampled_symbol_norm(chi_symbol(1.0), 2, grid, exec)?;
    let mut rows = Vec::new();
    for &s in ss {
        rows.push(CutoffScalingRow {
            s,
            chi_norm_matched: sampled_symbol_norm(chi_symbol(s), 2, &grid.matched(s), exec)?,
            chi_norm_reference: reference,
            weighted_norm: sampled_symbol_norm(weighted_phase_symbol(s), 2, grid, exec)?,
        });
    }
    let max_invariance_deviation = rows
        .iter()
        .fold(0.0f64, |m, r| m.max((r.chi_norm_matched - r.chi_norm_reference).abs()));
    let xs: Vec<f64> = rows.iter().map(|r| r.s.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.weighted_norm.ln()).collect();
    let (weighted_exponent, _, _) = crate::diagnostics::linear_regression(&xs, &ys);
    Ok(CutoffScalingReport {
        rows,
        max_invariance_deviation,
        weighted_exponent,
    })
}
