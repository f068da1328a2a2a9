use serde::{Deserialize, Serialize};
use tk_mhd::PhysParams;

use crate::NmError;

/// Prefactor `c` in the default `gamma = c lam^{-delta/8}`.
pub const GAMMA_PREFACTOR: f64 = 0.4;

/// `gamma = GAMMA_PREFACTOR lam^{-delta/8}`.
pub fn default_gamma(p: &PhysParams) -> f64 {
    GAMMA_PREFACTOR * p.lam.powf(-p.delta / 8.0)
}

/// Which solver stands in for `Pi_n L_n^{-1} Pi_n`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    /// Direct LU of the truncated operator.
    #[default]
    Galerkin,
    /// The reduction chain.
    PaperPath,
}

/// Derived constants `(mu_bar, a, b)` for a given `sigma_bar` and `tau`:
/// `mu_bar = 3 sigma_bar + 3`, `a = max(3 mu_bar + 1, 2 (2 sigma_bar + tau + 1))`,
/// `b = mu_bar + a + 1`.
pub fn scheme_constants(sigma_bar: f64, tau: f64) -> (f64, f64, f64) {
    let mu = 3.0 * sigma_bar + 3.0;
    let a = (3.0 * mu + 1.0).max(2.0 * (2.0 * sigma_bar + tau + 1.0));
    (mu, a, mu + a + 1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NMConfig {
    /// `N_0`; the truncations are `N_n = N_0^{chi^n}`.
    pub n0: f64,
    pub chi: f64,
    pub tau: f64,
    /// `N = 2 tau + 2`.
    pub n_smooth: u32,
    /// `M = 6 (N + 1)`.
    pub m_const: u32,
    pub delta: f64,
    pub a_const: f64,
    pub b_const: f64,
    pub s0: f64,
    pub sigma_bar: f64,
    pub max_steps: usize,
    pub target_residual: f64,
    /// Upper limit for `lam^{-delta/3} gamma^{-2}`.
    pub smallness_eps: f64,
    /// Membership truncation `k_check` of the Melnikov test.
    pub k_check: usize,
}

impl Default for NMConfig {
    fn default() -> Self {
        let (tau, sigma_bar) = (2.0, 8.0);
        let (_, a, b) = scheme_constants(sigma_bar, tau);
        let n_smooth = 6;
        Self {
            n0: 4.0,
            chi: 1.5,
            tau,
            n_smooth,
            m_const: 6 * (n_smooth + 1),
            delta: 0.06,
            a_const: a,
            b_const: b,
            s0: tk_spectral::DEFAULT_S0,
            sigma_bar,
            max_steps: 16,
            target_residual: 1e-10,
            smallness_eps: 10.0,
            k_check: 64,
        }
    }
}

impl NMConfig {
    /// The configuration matching `p.delta`.
    pub fn for_params(p: &PhysParams) -> Self {
        Self {
            delta: p.delta,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), NmError> {
        let bad = |m: String| Err(NmError::Config(m));
        if !(self.n0 > 1.0) {
            return bad(format!("n0 must exceed 1, got {}", self.n0));
        }
        if self.chi != 1.5 {
            return bad(format!("chi is fixed at 3/2, got {}", self.chi));
        }
        if self.tau != 2.0 {
            return bad(format!("tau is fixed at 2, got {}", self.tau));
        }
        if self.n_smooth as f64 != 2.0 * self.tau + 2.0 {
            return bad(format!("n_smooth must be 2 tau + 2, got {}", self.n_smooth));
        }
        if self.m_const != 6 * (self.n_smooth + 1) {
            return bad(format!("m_const must be 6 (n_smooth + 1), got {}", self.m_const));
        }
        if !(self.sigma_bar > 0.0) {
            return bad(format!("sigma_bar must be positive, got {}", self.sigma_bar));
        }
        let (mu, a, _) = scheme_constants(self.sigma_bar, self.tau);
        if self.a_const < a {
            return bad(format!("a_const must be at least {a}, got {}", self.a_const));
        }
        if self.b_const != mu + self.a_const + 1.0 {
            return bad(format!("b_const must be mu_bar + a_const + 1 = {}, got {}", mu + self.a_const + 1.0, self.b_const));
        }
        if !(self.delta > 0.0) {
            return bad(format!("delta must be positive, got {}", self.delta));
        }
        if !(self.target_residual > 0.0) || self.max_steps == 0 {
            return bad("target_residual and max_steps must be positive".into());
        }
        if !(self.smallness_eps > 0.0) || self.k_check == 0 {
            return bad("smallness_eps and k_check must be positive".into());
        }
        Ok(())
    }

    /// Whether `delta < 1/((M+1)(tau+2))`, the regime where the scheme's
    /// estimates are claimed. Desk runs usually sit outside it.
    pub fn asymptotic_regime(&self) -> bool {
        self.delta < PhysParams::delta_bound(self.m_const, self.tau)
    }

    /// `N_n = N_0^{chi^n}`.
    pub fn truncation(&self, n: usize) -> f64 {
        self.n0.powf(self.chi.powi(n as i32))
    }

    /// `gamma_n = gamma (1 + 2^{-n})`.
    pub fn gamma_n(gamma: f64, n: usize) -> f64 {
        gamma * (1.0 + 0.5f64.powi(n as i32))
    }

    pub fn s_high(&self) -> f64 {
        self.s0 + self.b_const
    }

    pub fn mu_bar(&self) -> f64 {
        3.0 * self.sigma_bar + 3.0
    }
}
