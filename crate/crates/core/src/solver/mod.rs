//! Time integration of the rotated equation and the direct trilinear oracle.

mod config;
mod duhamel;
mod integrator;
mod rhs;

pub use config::RunConfig;
pub use duhamel::{
    duhamel_oracle, max_relative_deviation, trilinear_pseudospectral, Aliasing, TrilinearQuery,
    TrilinearSymbol, ORACLE_MAX_MODES,
};
pub use integrator::{SimState, Solver, Trajectory, TrajectoryPoint};
pub use rhs::nonlinear_rhs;
pub(crate) use rhs::{cubic_term, dealias_mask};
