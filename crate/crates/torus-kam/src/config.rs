use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tk_mhd::{default_forcing_modes, ForcingModes, PhysParams};
use tk_nash_moser::{Backend, NMConfig};
use tk_spectral::{Lattice, ProductEngine};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunKind {
    Approx,
    Solve,
    LinearizeCheck,
    ReduceCheck,
    Measure,
    Scaling,
}

impl RunKind {
    pub fn name(self) -> &'static str {
        match self {
            RunKind::Approx => "approx",
            RunKind::Solve => "solve",
            RunKind::LinearizeCheck => "linearize-check",
            RunKind::ReduceCheck => "reduce-check",
            RunKind::Measure => "measure",
            RunKind::Scaling => "scaling",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LatticeConfig {
    pub n_max: usize,
    pub engine: ProductEngine,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        Self {
            n_max: 16,
            engine: ProductEngine::Direct,
        }
    }
}

impl LatticeConfig {
    pub fn lattice(&self) -> Lattice {
        Lattice::new(self.n_max).with_engine(self.engine)
    }
}

/// `delta` is derived as `3 eta`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhysConfig {
    pub lam: f64,
    pub eta: f64,
    pub b_avg: [f64; 2],
}

impl Default for PhysConfig {
    fn default() -> Self {
        Self {
            lam: 1e3,
            eta: 0.02,
            b_avg: PhysParams::DEFAULT_B,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DioConfig {
    /// `None`: the default `gamma(lam)` at every grid point.
    pub gamma: Option<f64>,
    pub tau: f64,
    pub k_check: usize,
    /// A drawn frequency satisfies the condition at this constant, which
    /// must exceed every `gamma_n` used by the iteration.
    pub draw_gamma: f64,
}

impl Default for DioConfig {
    fn default() -> Self {
        Self {
            gamma: None,
            tau: 2.0,
            k_check: 64,
            draw_gamma: 0.6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LinearizeConfig {
    pub n_pairs: usize,
    pub eps: Vec<f64>,
    pub tol: f64,
    pub band: usize,
}

impl Default for LinearizeConfig {
    fn default() -> Self {
        Self {
            n_pairs: 10,
            eps: vec![1e-2, 5e-3, 2.5e-3],
            tol: 0.15,
            band: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReduceConfig {
    pub n_trunc: f64,
    pub gamma: f64,
    /// Amplitude of the band-3 perturbation defining the nontrivial state.
    pub perturbation: f64,
    /// Lattice of the matrix-free off-diagonal growth probe; 0 skips it.
    pub growth_lattice: usize,
    pub growth_perturbation: f64,
    pub growth_modes: Vec<[i32; 2]>,
    /// Radius of the disk on which the heat-inverse gain is maximized.
    pub gain_radius: usize,
    pub gain_lambdas: Vec<f64>,
}

impl Default for ReduceConfig {
    fn default() -> Self {
        Self {
            n_trunc: 8.0,
            gamma: 0.3,
            perturbation: 0.05,
            growth_lattice: 40,
            growth_perturbation: 0.05,
            growth_modes: (12..=32).step_by(4).map(|m| [m, 0]).collect(),
            gain_radius: 200,
            gain_lambdas: vec![10.0, 1e2, 1e3, 1e4],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MeasureConfig {
    pub gammas: Vec<f64>,
    pub n_samples: usize,
    pub k_check: usize,
    pub strip_gamma: f64,
    pub strip_k_max: i32,
    pub strip_samples: usize,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        Self {
            gammas: vec![0.1, 0.05, 0.025, 0.0125],
            n_samples: 100_000,
            k_check: 200,
            strip_gamma: 0.1,
            strip_k_max: 10,
            strip_samples: 1_000_000,
        }
    }
}

fn default_lambda_grid() -> Vec<f64> {
    vec![1e2, 1e3, 1e4]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub run_kind: RunKind,
    #[serde(default)]
    pub lattice: LatticeConfig,
    #[serde(default)]
    pub phys: PhysConfig,
    /// `None`: scheme defaults with `delta` taken from `phys`.
    #[serde(default)]
    pub nm: Option<NMConfig>,
    #[serde(default)]
    pub dio: DioConfig,
    /// Forcing modes file, relative to the config file.
    #[serde(default)]
    pub forcing: Option<PathBuf>,
    /// `None`: drawn from `[1,2]^2` with `seed`.
    #[serde(default)]
    pub omega: Option<[f64; 2]>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default = "default_lambda_grid")]
    pub lambda_grid: Vec<f64>,
    #[serde(default)]
    pub backend: Backend,
    #[serde(default)]
    pub linearize: LinearizeConfig,
    #[serde(default)]
    pub reduce: ReduceConfig,
    #[serde(default)]
    pub measure: MeasureConfig,
}

impl ExperimentConfig {
    pub fn new(run_kind: RunKind) -> Self {
        Self {
            run_kind,
            lattice: LatticeConfig::default(),
            phys: PhysConfig::default(),
            nm: None,
            dio: DioConfig::default(),
            forcing: None,
            omega: None,
            seed: 0,
            output_dir: None,
            lambda_grid: default_lambda_grid(),
            backend: Backend::default(),
            linearize: LinearizeConfig::default(),
            reduce: ReduceConfig::default(),
            measure: MeasureConfig::default(),
        }
    }

    /// Parses a config document; syntax and schema errors carry line and
    /// column.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Schema {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<(Self, PathBuf), CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((Self::from_json(&text)?, base))
    }

    pub fn params_at(&self, lam: f64) -> Result<PhysParams, CliError> {
        Ok(PhysParams::new(lam, self.phys.eta, self.phys.b_avg)?)
    }

    /// Fills every default that depends on other fields, reads the forcing
    /// file and re-checks the cross-field constraints.
    pub fn resolve(self, base_dir: &Path) -> Result<ResolvedConfig, CliError> {
        let invalid = |m: String| Err(CliError::Invalid(m));
        if self.lattice.n_max < 2 {
            return invalid(format!("lattice.n_max must be at least 2, got {}", self.lattice.n_max));
        }
        let params = self.params_at(self.phys.lam)?;
        let grid_kinds = [RunKind::Approx, RunKind::Scaling];
        if grid_kinds.contains(&self.run_kind) && self.lambda_grid.is_empty() {
            return invalid("lambda_grid is empty".into());
        }
        for &lam in &self.lambda_grid {
            self.params_at(lam)?;
        }
        if self.run_kind == RunKind::Scaling && self.lambda_grid.len() < 2 {
            return invalid("a scaling fit needs at least two lambda values".into());
        }
        let nm = self.nm.clone().unwrap_or_else(|| NMConfig::for_params(&params));
        nm.validate()?;
        if nm.delta != params.delta {
            return invalid(format!("nm.delta = {} but 3 eta = {}", nm.delta, params.delta));
        }
        if nm.tau != self.dio.tau {
            return invalid(format!("nm.tau = {} but dio.tau = {}", nm.tau, self.dio.tau));
        }
        if let Some(g) = self.dio.gamma {
            if !(g > 0.0 && 2.0 * g < 1.0) {
                return invalid(format!("dio.gamma must lie in (0, 1/2), got {g}"));
            }
        }
        if !(self.dio.draw_gamma > 0.0 && self.dio.draw_gamma < 1.0) {
            return invalid(format!("dio.draw_gamma must lie in (0, 1), got {}", self.dio.draw_gamma));
        }
        if self.dio.k_check == 0 {
            return invalid("dio.k_check must be positive".into());
        }
        if let Some(w) = self.omega {
            if !w.iter().all(|x| x.is_finite()) || w == [0.0, 0.0] {
                return invalid(format!("omega must be finite and nonzero, got {w:?}"));
            }
        }
        if self.linearize.eps.len() < 2 || self.linearize.eps.windows(2).any(|w| w[1] >= w[0]) {
            return invalid("linearize.eps needs at least two strictly decreasing values".into());
        }
        if self.measure.gammas.len() < 2 || self.measure.gammas.iter().any(|g| !(*g > 0.0 && *g < 1.0)) {
            return invalid("measure.gammas needs at least two values in (0, 1)".into());
        }
        if self.measure.n_samples < 1000 || self.measure.strip_samples < 1000 {
            return invalid("Monte Carlo sample counts must be at least 1000".into());
        }
        if self.reduce.n_trunc <= 0.0 || self.reduce.n_trunc > self.lattice.lattice().max_radius() {
            return invalid(format!("reduce.n_trunc = {} outside the lattice", self.reduce.n_trunc));
        }
        let forcing_modes = match &self.forcing {
            None => default_forcing_modes(),
            Some(p) => {
                let path = base_dir.join(p);
                let text = std::fs::read_to_string(&path).map_err(|e| CliError::Io {
                    path: path.clone(),
                    source: e,
                })?;
                serde_json::from_str(&text).map_err(|e| CliError::Schema {
                    line: e.line(),
                    column: e.column(),
                    message: format!("{}: {e}", path.display()),
                })?
            }
        };
        tk_mhd::build_forcing(self.lattice.lattice(), &forcing_modes, params.b_avg)?;
        Ok(ResolvedConfig {
            nm,
            forcing_modes,
            config: self,
        })
    }
}

/// The config with every default filled in; embedded in every output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResolvedConfig {
    #[serde(flatten)]
    pub config: ExperimentConfig,
    #[serde(rename = "nm_resolved")]
    pub nm: NMConfig,
    pub forcing_modes: ForcingModes,
}

impl ResolvedConfig {
    /// Hex SHA-256 of the canonical JSON.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document_gets_defaults() {
        let c = ExperimentConfig::from_json(r#"{"run_kind": "solve"}"#).unwrap();
        assert_eq!(c, ExperimentConfig::new(RunKind::Solve));
        let r = c.resolve(Path::new(".")).unwrap();
        assert_eq!(r.nm.delta, 0.06);
        assert_eq!(r.hash().len(), 64);
    }

    #[test]
    fn unknown_field_reports_its_line() {
        let text = "{\n  \"run_kind\": \"approx\",\n  \"lattice\": {\"n_max\": 8, \"nmax\": 3}\n}";
        match ExperimentConfig::from_json(text).unwrap_err() {
            CliError::Schema { line, message, .. } => {
                assert_eq!(line, 3);
                assert!(message.contains("nmax"), "{message}");
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn cross_field_checks() {
        let bad = |f: fn(&mut ExperimentConfig)| {
            let mut c = ExperimentConfig::new(RunKind::Approx);
            f(&mut c);
            matches!(c.resolve(Path::new(".")), Err(CliError::Invalid(_)))
        };
        assert!(bad(|c| c.lambda_grid.clear()));
        assert!(bad(|c| c.dio.gamma = Some(0.6)));
        assert!(bad(|c| c.dio.tau = 3.0));
        assert!(bad(|c| c.linearize.eps = vec![1e-3, 1e-2]));
        assert!(bad(|c| c.reduce.n_trunc = 100.0));
        assert!(bad(|c| c.omega = Some([0.0, 0.0])));
        let mut c = ExperimentConfig::new(RunKind::Solve);
        c.phys.eta = 0.01;
        // nm.delta follows eta when nm is left out
        assert_eq!(c.clone().resolve(Path::new(".")).unwrap().nm.delta, 0.03);
        c.nm = Some(NMConfig::default());
        assert!(matches!(c.resolve(Path::new(".")), Err(CliError::Invalid(_))));
    }

    #[test]
    fn hash_tracks_content() {
        let a = ExperimentConfig::new(RunKind::Measure).resolve(Path::new(".")).unwrap();
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        b.config.seed = 1;
        assert_ne!(a.hash(), b.hash());
    }
}
