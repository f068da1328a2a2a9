//! Symbols `a(x, xi)` on `T^2 x Z^2`, stored as x-Fourier coefficients
//! `a^(k, xi)` for `|k_i| <= n_x` and `|xi_i| <= xi_extent`.
//!
//! The quantization is `Op(a) u = sum_xi a(x, xi) u^(xi) e^{i xi.x}`, so in
//! Fourier variables `(Op(a) u)^(k') = sum_xi a^(k' - xi, xi) u^(xi)`.

mod block;
mod compose;
mod cutoff;
mod exp;
mod grid;
mod homological;

pub use block::BlockSymbol;
pub use compose::{compose_exact, compose_expand, multiply};
pub use cutoff::{chi, chi_lambda, cutoff_chi_lambda, cutoff_radius};
pub use exp::{exp_apply, exp_map, exp_terms_needed, ExpOperator, EXP_TAIL_TOL};
pub use grid::{quantize, quantize_into, weighted_norm, SymbolGrid};
pub use homological::{
    averaged, parabolic_residual, solve_parabolic_homological, solve_transport_homological,
    transport_residual,
};

#[derive(Debug, thiserror::Error)]
pub enum SymbolError {
    #[error(transparent)]
    Spectral(#[from] tk_spectral::SpectralError),
    #[error("xi extent {have} too small, need {need}")]
    XiExtent { need: usize, have: usize },
    #[error("vanishing divisor at x-mode {k:?}, xi = {xi:?}")]
    Resonance { k: [i32; 2], xi: [i32; 2] },
    #[error("exponential series needs {needed} terms, limit is {limit}")]
    Series { needed: usize, limit: usize },
}
