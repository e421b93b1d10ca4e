//! Pseudospectral simulation and verification toolkit for the two-dimensional
//! modified Zakharov-Kuznetsov equation in rotated coordinates,
//!
//! `d_t v + d_a^3 v + d_b^3 v + (d_a + d_b)(v^3) = 0`.

pub mod diagnostics;
pub mod error;
pub mod exec;
pub mod linear;
pub mod resonance;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
pub use exec::Execution;
