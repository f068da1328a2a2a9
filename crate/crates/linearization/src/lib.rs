//! The linearization `L = DF(I)` of the vorticity-current residual map.
//!
//! In block form, for `h = (Om^, J^)`:
//!
//! ```text
//! L_11 = lam w.grad - Lap + a.grad + R1     L_12 = d.grad + R2
//! L_21 = d.grad + R3                         L_22 = lam w.grad + a.grad + R4
//! ```
//!
//! with `a = lam^d BS(Om)`, `d = -b - lam^d BS(J)` and
//! `R1 Om^ = lam^d BS(Om^).grad Om`, `R2 J^ = -lam^d BS(J^).grad J`,
//! `R3 Om^ = lam^d [BS(Om^).grad J - 2 H(BS Om^, BS J)]`,
//! `R4 J^ = -lam^d [BS(J^).grad Om + 2 H(BS Om, BS J^)]`.

mod galerkin;
mod operator;
mod taylor;

pub use galerkin::{galerkin_matrix, galerkin_solve, GalerkinMatrix, ModeSpace};
pub use operator::{assemble, LinearizedOperator};
pub use taylor::{taylor_check, TaylorReport};

#[derive(Debug, thiserror::Error)]
pub enum LinError {
    #[error(transparent)]
    Spectral(#[from] tk_spectral::SpectralError),
    #[error(transparent)]
    Mhd(#[from] tk_mhd::MhdError),
    #[error("Galerkin matrix numerically singular (condition estimate {0:e})")]
    IllConditioned(f64),
    #[error("truncation radius {0} must be positive")]
    Truncation(f64),
    #[error("malformed matrix data: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
