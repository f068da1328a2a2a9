//! Small-divisor bookkeeping for frequencies `omega` in the plane.

mod divisor;
mod fit;
mod measure;
mod transport;

use serde::{Deserialize, Serialize};

pub use divisor::{
    is_diophantine, melnikov_check, melnikov_ok, min_divisor_brute, witness, DivisorCheck,
    FrequencyWitness, ZTable,
};
pub use fit::{linear_fit, LinearFit};
pub use measure::{draw_diophantine, measure_estimate, MeasureEstimate, Region};
pub use transport::{
    apply_directional, apply_l_lambda, gain_sup, heat_eigenvalue, invert_directional,
    invert_l_lambda, loss_sup,
};

/// Parameters of the condition `|omega . k| >= gamma / |k|^tau`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DioParams {
    pub gamma: f64,
    pub tau: f64,
    /// Membership is certified on `0 < |k| <= k_check` only.
    pub k_check: usize,
}

impl DioParams {
    pub fn new(gamma: f64, tau: f64, k_check: usize) -> Result<Self, DioError> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(DioError::Param(format!("gamma must lie in (0,1), got {gamma}")));
        }
        if !(tau > 0.0) {
            return Err(DioError::Param(format!("tau must be positive, got {tau}")));
        }
        if k_check == 0 {
            return Err(DioError::Param("k_check must be positive".into()));
        }
        Ok(Self { gamma, tau, k_check })
    }

    pub fn with_gamma(self, gamma: f64) -> Self {
        Self { gamma, ..self }
    }
}

impl Default for DioParams {
    fn default() -> Self {
        Self {
            gamma: 0.01,
            tau: 2.0,
            k_check: 200,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum DioError {
    #[error(transparent)]
    Spectral(#[from] tk_spectral::SpectralError),
    #[error("vanishing divisor at k = {0:?}")]
    Resonance([i32; 2]),
    #[error("invalid parameter: {0}")]
    Param(String),
}
