//! Rescaled vorticity-current system for forced 2D MHD traveling waves.
//!
//! Unknowns are the vorticity `Omega` and the current `J` of the profile;
//! velocity and magnetic field are `U = lam^delta BS(Omega)` and
//! `B = lam^delta BS(J)`, with `BS = grad^perp (-Delta)^{-1}`.

mod forcing;
mod params;
mod physical;
mod system;

pub use forcing::{build_forcing, default_forcing_modes, ForcingModes, ForcingSpec, ModeEntry};
pub use params::PhysParams;
pub use physical::{reconstruct_physical, recover_pressure, PhysicalFields, PhysicalReport};
pub use system::{bilinear_h, evaluate_f, forcing_scale};

#[derive(Debug, thiserror::Error)]
pub enum MhdError {
    #[error(transparent)]
    Spectral(#[from] tk_spectral::SpectralError),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("forcing has a k = 0 entry (nonzero mean)")]
    ForcingMean,
    #[error("forcing is not real: mode {0:?} lacks a conjugate partner")]
    ForcingReality([i32; 2]),
    #[error("forcing mode {0:?} lies outside the lattice")]
    ForcingRange([i32; 2]),
    #[error("no mode with b.k != 0 and F(k) != 0")]
    Degenerate,
}
