/// `C^inf` step: 1 on `[0, pass]`, 0 on `[stop, inf)`, built from the
/// `exp(-1/s)` bump.
pub fn smooth_cutoff(k: f64, pass: f64, stop: f64) -> f64 {
    let k = k.abs();
    if k <= pass {
        return 1.0;
    }
    if k >= stop {
        return 0.0;
    }
    let s = (k - pass) / (stop - pass);
    let g = |u: f64| if u > 0.0 { (-1.0 / u).exp() } else { 0.0 };
    let (lo, hi) = (g(1.0 - s), g(s));
    lo / (lo + hi)
}

/// Wraps `d` into `[-len/2, len/2)`.
pub fn wrap(d: f64, len: f64) -> f64 {
    (d + 0.5 * len).rem_euclid(len) - 0.5 * len
}
