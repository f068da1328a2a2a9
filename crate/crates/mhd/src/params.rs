use serde::{Deserialize, Serialize};

use crate::MhdError;

/// `lam`: wave speed scale; `delta = 3 eta`; `b_avg`: mean magnetic field.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysParams {
    pub lam: f64,
    pub eta: f64,
    pub delta: f64,
    pub b_avg: [f64; 2],
}

impl PhysParams {
    /// Default mean field direction `(1, sqrt 2 - 1)`: no lattice vector is
    /// orthogonal to it.
    pub const DEFAULT_B: [f64; 2] = [1.0, std::f64::consts::SQRT_2 - 1.0];

    pub fn new(lam: f64, eta: f64, b_avg: [f64; 2]) -> Result<Self, MhdError> {
        let p = Self {
            lam,
            eta,
            delta: 3.0 * eta,
            b_avg,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), MhdError> {
        if !(self.lam > 1.0) || !self.lam.is_finite() {
            return Err(MhdError::Param(format!("lam must exceed 1, got {}", self.lam)));
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(MhdError::Param(format!("eta must lie in (0,1), got {}", self.eta)));
        }
        if self.delta != 3.0 * self.eta {
            return Err(MhdError::Param("delta must equal 3 eta".into()));
        }
        if self.b_avg == [0.0, 0.0] {
            return Err(MhdError::Param("mean magnetic field must be nonzero".into()));
        }
        Ok(())
    }

    pub fn with_lam(self, lam: f64) -> Self {
        Self { lam, ..self }
    }

    /// `lam^delta`.
    pub fn amp(&self) -> f64 {
        self.lam.powf(self.delta)
    }

    /// Upper bound `1/((M+1)(tau+2))` on `delta` in the asymptotic regime.
    pub fn delta_bound(m_const: u32, tau: f64) -> f64 {
        1.0 / ((m_const as f64 + 1.0) * (tau + 2.0))
    }

    pub fn in_asymptotic_regime(&self, m_const: u32, tau: f64) -> bool {
        self.delta < Self::delta_bound(m_const, tau)
    }
}

impl Default for PhysParams {
    fn default() -> Self {
        Self {
            lam: 1e3,
            eta: 0.02,
            delta: 3.0 * 0.02,
            b_avg: Self::DEFAULT_B,
        }
    }
}
