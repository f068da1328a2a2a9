//! Reduction of the linearized operator `L` to a diagonal transport operator,
//! and the inverse assembled from that chain.
//!
//! All stages act on the truncated space `V_N` spanned by `e^{ik.x}`,
//! `0 < |k| <= N`, as dense matrices:
//!
//! 1. decoupling: `L_1 = Phi^{-1} L Phi` with `Phi` a product of exponentials
//!    of off-diagonal generators solving parabolic homological equations;
//! 2. heat block: `(L_1^(1))^{-1}` by a Neumann series around `L_lam`;
//! 3. Schur complement `P = L_1^(4) - L^(3) (L_1^(1))^{-1} L^(2)`;
//! 4. straightening: `A^{-1} P A` with `A u = u(x + alpha(x))`;
//! 5. lower orders: `V^{-1} P_0 V = diag(i lam w.k + z(k)) + R_1`;
//! 6. `P^{-1} = A V (D + R_1)^{-1} V^{-1} A^{-1}` and the block inverse.
//!
//! A matrix-free variant of the first decoupling step works on large
//! lattices to measure the order of the remaining off-diagonal coupling.

mod decouple;
mod dense;
mod heat;
mod lower;
mod path;
mod straighten;

pub use decouple::{decouple, offdiag_growth, DecoupledOperator, OffdiagGrowth};
pub use dense::{spectral_norm, CMat, Modes};
pub use heat::{invert_heat_block, schur_to_transport, HeatSplit, SchurReduction, HEAT_CONTRACTION_LIMIT};
pub use lower::{check_melnikov, invert_transport, reduce_lower_orders, LowerOrders, TransportReduction};
pub use path::{invert_linearized_paper_path, PaperPath, StageReport, ZEntry};
pub use straighten::{straighten_transport, Straightening};

use serde::{Deserialize, Serialize};
use tk_linearization::LinError;
use tk_spectral::SpectralError;
use tk_symbols::SymbolError;

/// Pipeline stage, used to tag errors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Galerkin,
    Decouple,
    Heat,
    Schur,
    Straighten,
    LowerOrders,
    Transport,
    Assemble,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Stage::Galerkin => "galerkin",
            Stage::Decouple => "decouple",
            Stage::Heat => "heat",
            Stage::Schur => "schur",
            Stage::Straighten => "straighten",
            Stage::LowerOrders => "lower_orders",
            Stage::Transport => "transport",
            Stage::Assemble => "assemble",
        };
        f.write_str(s)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ReductionError {
    #[error(transparent)]
    Lin(#[from] LinError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("smallness condition violated: {value:.3e} > {limit:.3e}")]
    Smallness { value: f64, limit: f64 },
    #[error("exponential series out of range (1-norm of generator {0:.3e})")]
    ExpSeries(f64),
    #[error("Neumann series not contractive (factor {0:.4})")]
    Contraction(f64),
    #[error("Neumann series not converged after {0} terms")]
    NeumannStall(usize),
    #[error("straightening fixed point not contractive (increment {0:.3e})")]
    FixedPoint(f64),
    #[error("diffeomorphism folds: sup |grad alpha| = {0:.4}")]
    Fold(f64),
    #[error("Melnikov condition fails at k = {k:?} (normalized divisor {value:.4})")]
    Melnikov { k: [i32; 2], value: f64 },
    #[error("resonant divisor at k = {0:?}")]
    Resonance([i32; 2]),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("dense linear algebra failure: {0}")]
    Dense(String),
    #[error("{stage}: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<ReductionError>,
    },
}

impl ReductionError {
    /// The innermost error, with stage tags removed.
    pub fn root(&self) -> &ReductionError {
        match self {
            ReductionError::Stage { source, .. } => source.root(),
            e => e,
        }
    }

    pub fn stage(&self) -> Option<Stage> {
        match self {
            ReductionError::Stage { stage, .. } => Some(*stage),
            _ => None,
        }
    }
}

pub(crate) trait StageExt<T> {
    fn at(self, stage: Stage) -> Result<T, ReductionError>;
}

impl<T, E: Into<ReductionError>> StageExt<T> for Result<T, E> {
    fn at(self, stage: Stage) -> Result<T, ReductionError> {
        self.map_err(|e| match e.into() {
            tagged @ ReductionError::Stage { .. } => tagged,
            e => ReductionError::Stage {
                stage,
                source: Box::new(e),
            },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionConfig {
    /// Truncation radius `N` of `V_N`.
    pub n_trunc: f64,
    pub decouple_steps: usize,
    pub lower_steps: usize,
    pub gamma: f64,
    pub tau: f64,
    /// Melnikov membership is certified on `|k| <= k_check`.
    pub k_check: usize,
    /// Bound on `lam^{-delta} / gamma` required before decoupling.
    pub smallness_eps: f64,
    pub neumann_tol: f64,
    pub max_neumann_terms: usize,
    /// Loss-of-derivatives offset used in norm labels.
    pub sigma_bar: f64,
}

impl Default for ReductionConfig {
    fn default() -> Self {
        Self {
            n_trunc: 8.0,
            decouple_steps: 2,
            lower_steps: 6,
            gamma: 0.35,
            tau: 2.0,
            k_check: 64,
            smallness_eps: 10.0,
            neumann_tol: 1e-15,
            max_neumann_terms: 600,
            sigma_bar: 8.0,
        }
    }
}

impl ReductionConfig {
    pub fn with_gamma(self, gamma: f64) -> Self {
        Self { gamma, ..self }
    }

    pub fn with_truncation(self, n_trunc: f64) -> Self {
        Self { n_trunc, ..self }
    }
}
