//! Experiment orchestration for the traveling-wave construction: every
//! subcommand reads one JSON config, runs a study and writes a JSON summary
//! plus CSV tables into the output directory.

mod common;
pub mod config;
mod output;

pub mod approx;
pub mod linearize;
pub mod measure;
pub mod reduce;
pub mod scaling;
pub mod solve;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use tk_nash_moser::{FailureKind, NmError};

pub use config::{ExperimentConfig, ResolvedConfig, RunKind};
pub use output::Output;

/// Environment variable consulted when `--threads` is absent.
pub const THREADS_ENV: &str = "TORUS_KAM_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config line {line}, column {column}: {message}")]
    Schema { line: usize, column: usize, message: String },
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("writing {file}: {message}")]
    Write { file: String, message: String },
    #[error("{stage}: {source}")]
    Numeric {
        stage: String,
        #[source]
        source: NmError,
    },
}

impl CliError {
    pub fn numeric(stage: impl Into<String>, e: impl Into<NmError>) -> Self {
        CliError::Numeric {
            stage: stage.into(),
            source: e.into(),
        }
    }

    /// 0 success, 2 validation, 3 numerical precondition, 4 divergence,
    /// 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema { .. } | CliError::Invalid(_) => 2,
            CliError::Io { .. } | CliError::Write { .. } => 1,
            CliError::Numeric { source, .. } => match source.kind() {
                FailureKind::Validation => 2,
                FailureKind::Precondition => 3,
                FailureKind::Divergence => 4,
                FailureKind::Other => 1,
            },
        }
    }
}

/// Parameter and forcing errors met while resolving a config.
impl From<tk_mhd::MhdError> for CliError {
    fn from(e: tk_mhd::MhdError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<NmError> for CliError {
    fn from(e: NmError) -> Self {
        CliError::numeric("config", e)
    }
}

/// What a subcommand reports; serialized as the JSON summary.
#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub run_kind: RunKind,
    pub config_hash: String,
    pub config: ResolvedConfig,
    pub status: String,
    pub error: Option<String>,
    /// Pass/fail of each quantitative check the study supports.
    pub checks: BTreeMap<String, bool>,
    pub results: serde_json::Value,
    pub files: Vec<String>,
}

impl Summary {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.values().all(|&b| b)
    }

    /// A number from `results` by JSON pointer.
    pub fn metric(&self, pointer: &str) -> Option<f64> {
        self.results.pointer(pointer).and_then(serde_json::Value::as_f64)
    }
}

/// Runs the study named in the config and writes its files under `out_dir`.
pub fn execute(rc: &ResolvedConfig, out_dir: &Path) -> Result<Summary, CliError> {
    let mut out = Output::create(out_dir, rc)?;
    match rc.config.run_kind {
        RunKind::Approx => approx::run(rc, &mut out),
        RunKind::Solve => solve::run(rc, &mut out),
        RunKind::LinearizeCheck => linearize::run(rc, &mut out),
        RunKind::ReduceCheck => reduce::run(rc, &mut out),
        RunKind::Measure => measure::run(rc, &mut out),
        RunKind::Scaling => scaling::run(rc, &mut out),
    }
}
