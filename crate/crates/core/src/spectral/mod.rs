//! Periodic grid, transforms, Fourier multipliers and the `(x, y) <-> (x_a, x_b)`
//! coordinate algebra.
//!
//! Transform convention: `c(k) = (1/N) sum_j v(x_j) e^{-i k.x_j}` with
//! `x_j = -len/2 + j len/n`, so `v(x) = sum_k c(k) e^{i k.x}` and
//! `||v||_{L^2}^2 = area * sum_k |c(k)|^2`.

pub mod coords;
mod field;
mod grid;
pub mod ic;
mod multiplier;
pub mod snapshot;
pub mod window;

pub use coords::dual_map_check;
pub use field::{Field, Frame, SpectralField};
pub use grid::{signed_index, Axis, Grid, GridSpec};
pub use ic::{evaluate_ic, InitialCondition};
pub use multiplier::Multiplier;

/// Builds a grid handle; alias kept for callers that think in operations.
pub fn make_grid(spec: GridSpec) -> crate::Result<Grid> {
    Grid::new(spec)
}
