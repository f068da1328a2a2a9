use std::io::{BufRead, Write};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use tk_diophantine::{linear_fit, melnikov_check, DioParams, LinearFit, ZTable};
use tk_linearization::{assemble, galerkin_matrix, galerkin_solve};
use tk_reduction::{PaperPath, ReductionConfig, ReductionError};
use tk_spectral::StatePair;

use crate::approx::{build_approx_solution, Problem};
use crate::config::{Backend, NMConfig};
use crate::NmError;

/// One step `I_{n-1} -> I_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    /// `n`, counting from 1.
    pub step: usize,
    /// `N_{n-1}`, the truncation of the linear solve.
    pub truncation: f64,
    /// `gamma_n` of the membership check.
    pub gamma_n: f64,
    pub backend: Backend,
    /// `||F(I_n)||_{s0}`.
    pub residual_s0: f64,
    /// `||F(I_n)||_{s0 + b}`.
    pub residual_high: f64,
    /// `||I_n||_{s0 + b}`.
    pub state_high: f64,
    /// `||h_n||_{s0 + sigma_bar}`.
    pub step_norm: f64,
    pub melnikov_pass: bool,
    pub melnikov_min_divisor: f64,
    /// Seconds; never persisted.
    #[serde(skip)]
    pub wallclock: f64,
}

/// The envelopes `||F(I_n)||_{s0} <= C N_{n-1}^{-a}` and
/// `||I_n||_{s0+b} <= C N_{n-1}^{a}`, with the constants frozen at `n = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub c_residual: f64,
    pub c_high: f64,
    /// Per step: whether the residual stays under its envelope (1% slack).
    pub residual_ok: Vec<bool>,
    pub high_ok: Vec<bool>,
}

impl Envelope {
    fn from_trace(trace: &[IterationRecord], a: f64) -> Option<Self> {
        let first = trace.first()?;
        let n0 = first.truncation;
        let c_residual = first.residual_s0 * n0.powf(a);
        let c_high = first.state_high / n0.powf(a);
        Some(Self {
            c_residual,
            c_high,
            residual_ok: trace
                .iter()
                .map(|r| r.residual_s0 <= 1.01 * c_residual * r.truncation.powf(-a))
                .collect(),
            high_ok: trace
                .iter()
                .map(|r| r.state_high <= 1.01 * c_high * r.truncation.powf(a))
                .collect(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct NmOutcome {
    pub approx: StatePair,
    pub final_state: StatePair,
    /// `||F(I_0)||_{s0}`.
    pub initial_residual: f64,
    pub trace: Vec<IterationRecord>,
    pub converged: bool,
    pub envelope: Option<Envelope>,
    /// Fit of `ln ||F(I_n)||_{s0}` against `chi^n`.
    pub decay_fit: Option<LinearFit>,
    /// Measured `a` in `||F(I_n)||_{s0} ~ N_{n-1}^{-a}`, fitted over the steps
    /// whose truncation is not capped by the lattice.
    pub decay_exponent: Option<f64>,
    pub asymptotic_regime: bool,
}

fn reduction_config(cfg: &NMConfig, truncation: f64, gamma: f64) -> ReductionConfig {
    ReductionConfig {
        n_trunc: truncation,
        gamma,
        tau: cfg.tau,
        k_check: cfg.k_check,
        smallness_eps: cfg.smallness_eps,
        sigma_bar: cfg.sigma_bar,
        ..ReductionConfig::default()
    }
}

/// `I_n = I_{n-1} - Pi L^{-1} Pi F(I_{n-1})` on `Pi = Pi_{N_{n-1}}`.
pub fn nm_step(
    problem: &Problem,
    state: &StatePair,
    n: usize,
    cfg: &NMConfig,
    backend: Backend,
) -> Result<(StatePair, IterationRecord), NmError> {
    assert!(n >= 1, "steps count from 1");
    let start = Instant::now();
    let truncation = cfg.truncation(n - 1).min(state.lattice().max_radius());
    let gamma_n = NMConfig::gamma_n(problem.gamma, n);
    let (lam, omega) = (problem.params.lam, problem.omega);
    let wrap = |e: NmError| NmError::Inverse { step: n, source: Box::new(e) };

    let f = problem.residual(state)?;
    let op = assemble(state, &problem.params, omega)?;
    let dio = DioParams::new(gamma_n, cfg.tau, cfg.k_check).map_err(|e| NmError::Config(e.to_string()))?;
    let (h, check) = match backend {
        Backend::Galerkin => {
            let check = melnikov_check(omega, lam, &dio, &ZTable::new());
            if !check.ok {
                return Err(NmError::Membership { step: n, k: check.argmin, divisor: check.min_divisor });
            }
            let gm = galerkin_matrix(&op, truncation).map_err(|e| wrap(e.into()))?;
            (galerkin_solve(&gm, &f).map_err(|e| wrap(e.into()))?, check)
        }
        Backend::PaperPath => {
            let rc = reduction_config(cfg, truncation, gamma_n);
            let path = PaperPath::build(&op, &rc).map_err(|e| match e.root() {
                ReductionError::Melnikov { k, value } => NmError::Membership { step: n, k: *k, divisor: *value },
                _ => wrap(e.into()),
            })?;
            let check = melnikov_check(omega, lam, &dio, &path.transport.z_table);
            (path.solve(&f).map_err(|e| wrap(e.into()))?, check)
        }
    };
    let next = state.sub(&h);
    let f_next = problem.residual(&next)?;
    let s_high = cfg.s_high();
    let rec = IterationRecord {
        step: n,
        truncation,
        gamma_n,
        backend,
        residual_s0: f_next.sobolev_norm(cfg.s0),
        residual_high: f_next.sobolev_norm(s_high),
        state_high: next.sobolev_norm(s_high),
        step_norm: h.sobolev_norm(cfg.s0 + cfg.sigma_bar),
        melnikov_pass: check.ok,
        melnikov_min_divisor: check.min_divisor,
        wallclock: start.elapsed().as_secs_f64(),
    };
    Ok((next, rec))
}

fn check_preconditions(problem: &Problem, cfg: &NMConfig) -> Result<(), NmError> {
    cfg.validate()?;
    problem.params.validate()?;
    if cfg.delta != problem.params.delta {
        return Err(NmError::Config(format!(
            "delta differs between the scheme ({}) and the physical parameters ({})",
            cfg.delta, problem.params.delta
        )));
    }
    if !(problem.gamma > 0.0 && 2.0 * problem.gamma < 1.0) {
        return Err(NmError::Config(format!("gamma must lie in (0, 1/2), got {}", problem.gamma)));
    }
    let p = &problem.params;
    let value = p.lam.powf(-p.delta / 3.0) / (problem.gamma * problem.gamma);
    if !(value <= cfg.smallness_eps) {
        return Err(NmError::Smallness {
            value,
            limit: cfg.smallness_eps,
        });
    }
    Ok(())
}

/// Iterates from the approximate solution until `||F||_{s0}` drops below
/// the target or `max_steps` is reached. Failures after the first step carry
/// the trace so far.
pub fn run_iteration(problem: &Problem, cfg: &NMConfig, backend: Backend) -> Result<NmOutcome, NmError> {
    check_preconditions(problem, cfg)?;
    let dio = DioParams::new(problem.gamma, cfg.tau, cfg.k_check).map_err(|e| NmError::Config(e.to_string()))?;
    let approx = build_approx_solution(&problem.forcing, &problem.params, problem.omega, &dio)?;
    let initial_residual = problem.residual(&approx)?.sobolev_norm(cfg.s0);

    let mut state = approx.clone();
    let mut trace: Vec<IterationRecord> = Vec::new();
    let mut monitor = GrowthMonitor::new(initial_residual);
    let mut converged = initial_residual <= cfg.target_residual;
    for n in 1..=cfg.max_steps {
        if converged {
            break;
        }
        let (next, rec) = match nm_step(problem, &state, n, cfg, backend) {
            Ok(x) => x,
            Err(e) => {
                return Err(NmError::Run {
                    source: Box::new(e),
                    trace,
                })
            }
        };
        let diverging = monitor.push(rec.residual_s0);
        converged = rec.residual_s0 <= cfg.target_residual;
        trace.push(rec);
        state = next;
        if diverging {
            return Err(NmError::Run {
                source: Box::new(NmError::Divergence { step: n }),
                trace,
            });
        }
    }
    let envelope = Envelope::from_trace(&trace, cfg.a_const);
    let decay_fit = (trace.len() >= 2).then(|| {
        let xs: Vec<f64> = trace.iter().map(|r| cfg.chi.powi(r.step as i32)).collect();
        let ys: Vec<f64> = trace.iter().map(|r| r.residual_s0.ln()).collect();
        linear_fit(&xs, &ys)
    });
    let uncapped: Vec<&IterationRecord> = trace
        .iter()
        .filter(|r| (r.truncation - cfg.truncation(r.step - 1)).abs() <= 1e-12 * r.truncation)
        .collect();
    let decay_exponent = (uncapped.len() >= 2).then(|| {
        let xs: Vec<f64> = uncapped.iter().map(|r| r.truncation.ln()).collect();
        let ys: Vec<f64> = uncapped.iter().map(|r| r.residual_s0.ln()).collect();
        -linear_fit(&xs, &ys).slope
    });
    Ok(NmOutcome {
        approx,
        final_state: state,
        initial_residual,
        trace,
        converged,
        envelope,
        decay_fit,
        decay_exponent,
        asymptotic_regime: cfg.asymptotic_regime(),
    })
}

/// Flags divergence: the residual grew on two consecutive steps.
#[derive(Clone, Debug)]
pub(crate) struct GrowthMonitor {
    last: f64,
    grew: usize,
}

impl GrowthMonitor {
    pub(crate) fn new(initial: f64) -> Self {
        Self { last: initial, grew: 0 }
    }

    /// Records a residual; true once divergence is detected.
    pub(crate) fn push(&mut self, r: f64) -> bool {
        self.grew = if r > self.last || r.is_nan() { self.grew + 1 } else { 0 };
        self.last = r;
        self.grew >= 2
    }
}

/// One JSON object per line.
pub fn write_trace_jsonl<W: Write>(trace: &[IterationRecord], mut w: W) -> Result<(), NmError> {
    for r in trace {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_trace_jsonl<R: BufRead>(r: R) -> Result<Vec<IterationRecord>, NmError> {
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(serde_json::from_str(&line)?);
        }
    }
    Ok(out)
}
