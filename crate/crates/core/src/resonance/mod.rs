//! Interaction phase algebra: resonant sets, singular identities, and the
//! anisotropic frequency cutoff.

mod classify;
mod cutoff;
mod identities;
mod phase;
mod scan;

pub use classify::{
    classify, m_gradxi_vanishing, resonance_predicate, MGradXi, ResonanceFlags, ResonanceRecord,
    SignPattern, DEFAULT_TOL,
};
pub use cutoff::{
    chi0, chi_symbol, cutoff_chi, cutoff_scaling, sampled_symbol_norm, weighted_phase_symbol,
    CutoffSample, CutoffScalingReport, CutoffScalingRow, SymbolGrid,
};
pub use identities::{identity_check, singular_identity_residual, IdentityReport, TRIPLE_LABELS};
pub use phase::{gradient_fd_check, phase, phase_gradients, PhaseGradients, PhasePoint};
pub use scan::{resonance_scan, resonant_point, sign_patterns, OffManifoldScan, ScanReport};
