//! Airy function `Ai` on the real line.
//!
//! Maclaurin series on `[-6.5, 1]`, the oscillatory asymptotic expansion
//! below `-6.5`, and the Macdonald integral above 1, where the series loses
//! relative accuracy to cancellation.

use std::f64::consts::{FRAC_PI_4, PI};

/// `Ai(0)`
pub const AI0: f64 = 0.355_028_053_887_817_24;
/// `-Ai'(0)`
pub const AIP0_NEG: f64 = 0.258_819_403_792_806_8;

const SWITCH: f64 = 6.5;
const SWITCH_POS: f64 = 1.0;

pub fn ai(z: f64) -> f64 {
    if z > SWITCH_POS {
        macdonald(z)
    } else if z >= -SWITCH {
        series(z)
    } else {
        asymptotic_neg(-z)
    }
}

fn series(z: f64) -> f64 {
    let z3 = z * z * z;
    let (mut f, mut g) = (1.0, z);
    let (mut tf, mut tg) = (1.0, z);
    for k in 1..200 {
        let k3 = 3.0 * k as f64;
        tf *= z3 / ((k3 - 1.0) * k3);
        tg *= z3 / (k3 * (k3 + 1.0));
        f += tf;
        g += tg;
        if tf.abs() <= 1e-18 * f.abs() && tg.abs() <= 1e-18 * g.abs().max(1e-300) {
            break;
        }
    }
    AI0 * f - AIP0_NEG * g
}

/// Coefficients `u_k` of the Airy asymptotic series.
fn u_coeffs() -> [f64; 64] {
    let mut u = [0.0; 64];
    u[0] = 1.0;
    for k in 1..64 {
        let kf = k as f64;
        u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
    }
    u
}

/// `Ai(z) = sqrt(z / 3) K_{1/3}(zeta) / pi` with
/// `K_nu(zeta) = int_0^inf exp(-zeta cosh u) cosh(nu u) du`, by the trapezoid
/// rule (exponentially convergent for this entire integrand).
fn macdonald(z: f64) -> f64 {
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let u_max = (1.0 + 40.0 / zeta).acosh();
    let h = 0.05;
    let n = (u_max / h).ceil() as usize;
    let mut acc = 0.5;
    for k in 1..=n {
        let u = k as f64 * h;
        acc += (-zeta * (u.cosh() - 1.0)).exp() * (u / 3.0).cosh();
    }
    (z / 3.0).sqrt() / PI * (-zeta).exp() * acc * h
}

fn asymptotic_neg(x: f64) -> f64 {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let u = u_coeffs();
    let (mut p, mut q) = (0.0, 0.0);
    let mut prev = f64::INFINITY;
    for k in 0..31 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let a = sign * u[2 * k] / zeta.powi(2 * k as i32);
        let b = sign * u[2 * k + 1] / zeta.powi(2 * k as i32 + 1);
        if a.abs() > prev {
            break;
        }
        p += a;
        q += b;
        prev = a.abs();
        if prev < 1e-17 {
            break;
        }
    }
    let theta = zeta - FRAC_PI_4;
    (theta.cos() * p + theta.sin() * q) / (PI.sqrt() * x.powf(0.25))
}

/// Independent evaluation on the steepest-descent contour,
/// `Ai(z) = Im[e^{i pi/3} int_0^inf exp(-r^3/3 - z r e^{i pi/3}) dr] / pi`,
/// by composite Simpson on `[0, 12]`. Meant for moderate `|z| <= 5`.
pub fn ai_contour(z: f64) -> f64 {
    use num_complex::Complex64;
    let w = Complex64::from_polar(1.0, PI / 3.0);
    let f = |r: f64| (-(r * r * r) / 3.0 - z * r * w).exp();
    let (n, r_max) = (24_000usize, 12.0);
    let h = r_max / n as f64;
    let mut acc = f(0.0) + f(r_max);
    for k in 1..n {
        acc += f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    (w * acc * (h / 3.0)).im / PI
}
