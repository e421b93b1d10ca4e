//! The linear change of variables between `(x, y)` and `(x_a, x_b)`.

/// `2^{2/3}`
pub fn two_two_thirds() -> f64 {
    2f64.powf(2.0 / 3.0)
}

/// Amplitude factor `v = 2^{-1/2} u`.
pub const AMPLITUDE_FACTOR: f64 = std::f64::consts::FRAC_1_SQRT_2;

pub fn xy_to_ab(x: f64, y: f64) -> (f64, f64) {
    let s = 3f64.sqrt() * y;
    let c = two_two_thirds();
    ((x + s) / c, (x - s) / c)
}

pub fn ab_to_xy(xa: f64, xb: f64) -> (f64, f64) {
    let c = two_two_thirds();
    (0.5 * c * (xa + xb), 0.5 * c * (xa - xb) / 3f64.sqrt())
}

/// `|det d(x, y) / d(x_a, x_b)| = 2^{1/3} / sqrt(3)`.
pub fn jacobian_xy_per_ab() -> f64 {
    2f64.powf(1.0 / 3.0) / 3f64.sqrt()
}

/// Dual map of the coordinate change: `(k_x, k_y) -> (k_a, k_b)`.
pub fn dual_ab(kx: f64, ky: f64) -> (f64, f64) {
    let s = ky / 3f64.sqrt();
    let c = 2.0 * 2f64.powf(-2.0 / 3.0);
    ((kx + s) / c, (kx - s) / c)
}

/// `|k_a^3 + k_b^3 - k_x (k_x^2 + k_y^2)|`: the dual map turns the symbol of
/// `d_x (d_x^2 + d_y^2)` into that of `d_a^3 + d_b^3`.
pub fn dual_map_check(kx: f64, ky: f64) -> f64 {
    let (ka, kb) = dual_ab(kx, ky);
    (ka * ka * ka + kb * kb * kb - kx * (kx * kx + ky * ky)).abs()
}
