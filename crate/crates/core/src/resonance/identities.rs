use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Coefficient triples `(c1, c2, c3)` with
/// `x (y + z) = c1 y (x - z) + c2 z (x - y) + c3 x y z`.
pub const TRIPLE_LABELS: [&str; 3] = ["(1, 1, 2/x)", "(1, -1, 2/y)", "(-1, 1, 2/z)"];

/// Residual of each identity at `(x, y, z)`; `None` when that triple's
/// denominator vanishes.
pub fn singular_identity_residual(x: f64, y: f64, z: f64) -> [Option<f64>; 3] {
    let lhs = x * (y + z);
    let rhs = |c1: f64, c2: f64, c3: f64| c1 * y * (x - z) + c2 * z * (x - y) + c3 * x * y * z;
    let res = |den: f64, c1: f64, c2: f64| (den != 0.0).then(|| (lhs - rhs(c1, c2, 2.0 / den)).abs());
    [res(x, 1.0, 1.0), res(y, 1.0, -1.0), res(z, -1.0, 1.0)]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub n_samples: usize,
    /// Per triple: largest `residual / (|x| + |y| + |z|)^2`.
    pub max_normalized: [f64; 3],
    /// Per triple: inputs skipped because the denominator vanished.
    pub skipped: [usize; 3],
}

/// Random triples in `[-range, range]^3` with every coordinate at least
/// `min_abs` away from zero.
pub fn identity_check(n: usize, range: f64, min_abs: f64, seed: u64) -> IdentityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = IdentityReport {
        n_samples: n,
        max_normalized: [0.0; 3],
        skipped: [0; 3],
    };
    let draw = |rng: &mut ChaCha8Rng| loop {
        let v: f64 = rng.gen_range(-range..range);
        if v.abs() >= min_abs {
            return v;
        }
    };
    for _ in 0..n {
        let (x, y, z) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
        let norm = (x.abs() + y.abs() + z.abs()).powi(2);
        for (k, r) in singular_identity_residual(x, y, z).iter().enumerate() {
            match r {
                Some(r) => report.max_normalized[k] = report.max_normalized[k].max(r / norm),
                None => report.skipped[k] += 1,
            }
        }
    }
    report
}
