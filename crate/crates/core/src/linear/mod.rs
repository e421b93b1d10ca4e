//! Exact linear flow, profiles, and the Airy kernel estimates.

pub mod airy;
mod kernel;
mod propagator;
mod weak_lp;

pub use airy::{ai, ai_contour};
pub use kernel::{
    airy_kernel_closed, airy_kernel_spectral, envelope_check, envelope_constant_1d,
    fractional_kernel_spectral, kernel_sample_closed, kernel_sample_spectral,
    self_similarity_deviation, EnvelopeConstant, KernelGrid1d, KernelSample, SpectralKernel1d,
};
pub use propagator::{hs_norm_coeffs, profile_of, propagate_linear, ProfileSnapshot};
pub use weak_lp::{weak_lp_from_magnitudes, weak_lp_norm, WeakLpReport, DEFAULT_LAMBDA_POINTS};
