//! Truncated Fourier fields on the flat torus `T^2 = (R / 2 pi Z)^2`.
//!
//! Fields are stored by their coefficients on a square lattice. Products go
//! through a collocation grid large enough to be alias-free, or through a
//! direct sparse convolution; see [`ProductEngine`].

mod calculus;
mod fft;
mod field;
pub mod io;
mod lattice;
mod product;
mod space;
mod state;
mod vector;

pub use calculus::{biot_savart, curl, div, grad, inv_laplacian, laplacian, partial, perp_grad, MEAN_TOL};
pub use field::TorusField;
pub use lattice::{bracket, dot, norm, norm_sq, Lattice, ProductEngine};
pub use product::{advect, pointwise_product};
pub use space::LinearSpace;
pub use state::StatePair;
pub use vector::VectorField2;

pub use num_complex::Complex64;

/// Default low Sobolev index `s0`.
pub const DEFAULT_S0: f64 = 5.5;
/// Default high Sobolev index `S`.
pub const DEFAULT_S_HIGH: f64 = 9.0;

#[derive(Debug, thiserror::Error)]
pub enum SpectralError {
    #[error("lattice mismatch: n_max {0} vs {1}")]
    LatticeMismatch(usize, usize),
    #[error("field has nonzero mean {0:e}")]
    NonzeroMean(f64),
    #[error("collocation size {got} below the alias-free minimum {need}")]
    Collocation { got: usize, need: usize },
    #[error("malformed field data: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
