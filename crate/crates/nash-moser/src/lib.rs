//! Approximate solution and Newton iteration with growing truncations
//! `N_n = N_0^{chi^n}` for the traveling-wave system `F(Omega, J) = 0`.

mod approx;
mod config;
mod iterate;
mod nondegeneracy;

pub use approx::{build_approx_solution, Problem};
pub use config::{default_gamma, scheme_constants, Backend, NMConfig, GAMMA_PREFACTOR};
pub use iterate::{
    nm_step, read_trace_jsonl, run_iteration, write_trace_jsonl, Envelope, IterationRecord, NmOutcome,
};
pub use nondegeneracy::{nondegeneracy_check, NondegeneracyReport};

use tk_linearization::LinError;
use tk_mhd::MhdError;
use tk_reduction::ReductionError;

#[derive(Debug, thiserror::Error)]
pub enum NmError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("frequency is resonant at k = {0:?}")]
    Resonance([i32; 2]),
    #[error("smallness condition fails: lam^(-delta/3) gamma^(-2) = {value} > {limit}")]
    Smallness { value: f64, limit: f64 },
    #[error("step {step}: Melnikov condition fails at k = {k:?} (normalized divisor {divisor})")]
    Membership { step: usize, k: [i32; 2], divisor: f64 },
    #[error("step {step}: residual grew on two consecutive steps")]
    Divergence { step: usize },
    #[error("step {step}: linear solve failed: {source}")]
    Inverse {
        step: usize,
        #[source]
        source: Box<NmError>,
    },
    #[error(transparent)]
    Lin(#[from] LinError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Mhd(#[from] MhdError),
    #[error(transparent)]
    Spectral(#[from] tk_spectral::SpectralError),
    #[error("{source}")]
    Run {
        #[source]
        source: Box<NmError>,
        trace: Vec<IterationRecord>,
    },
    #[error("trace I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("trace format: {0}")]
    Json(#[from] serde_json::Error),
}

/// Coarse failure classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailureKind {
    Validation,
    /// Resonance, contraction or smallness: the numerical preconditions.
    Precondition,
    Divergence,
    Other,
}

impl NmError {
    /// The error beneath any run or step wrappers.
    pub fn root(&self) -> &NmError {
        match self {
            NmError::Run { source, .. } | NmError::Inverse { source, .. } => source.root(),
            e => e,
        }
    }

    /// The iterations completed before the failure, if recorded.
    pub fn trace(&self) -> Option<&[IterationRecord]> {
        match self {
            NmError::Run { trace, .. } => Some(trace),
            _ => None,
        }
    }

    pub fn kind(&self) -> FailureKind {
        match self.root() {
            NmError::Config(_) => FailureKind::Validation,
            NmError::Resonance(_) | NmError::Smallness { .. } | NmError::Membership { .. } => FailureKind::Precondition,
            NmError::Divergence { .. } => FailureKind::Divergence,
            NmError::Reduction(e) => match e.root() {
                ReductionError::Param(_) => FailureKind::Validation,
                ReductionError::Lin(LinError::IllConditioned(_)) => FailureKind::Precondition,
                ReductionError::Lin(_) | ReductionError::Symbol(_) | ReductionError::Spectral(_) => FailureKind::Other,
                ReductionError::Dense(_) => FailureKind::Other,
                _ => FailureKind::Precondition,
            },
            NmError::Lin(LinError::IllConditioned(_)) => FailureKind::Precondition,
            NmError::Lin(LinError::Truncation(_)) | NmError::Mhd(MhdError::Param(_)) => FailureKind::Validation,
            _ => FailureKind::Other,
        }
    }
}
