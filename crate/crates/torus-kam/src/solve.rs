//! One Newton run at `phys.lam`, with the final state's bounds and the
//! physical fields rebuilt from it.

use serde::Serialize;
use tk_diophantine::LinearFit;
use tk_mhd::{reconstruct_physical, PhysicalReport};
use tk_nash_moser::{
    nondegeneracy_check, run_iteration, write_trace_jsonl, Envelope, IterationRecord, NmOutcome, NondegeneracyReport,
    Problem,
};
use tk_spectral::DEFAULT_S_HIGH;

use crate::common::{checks, forcing, gamma, omega};
use crate::{CliError, Output, ResolvedConfig, Summary};

/// Lower constant for `||Omega||_S lam^{2 delta/3}`; measured 1298-1301 on
/// `lam` in `{1e2, 1e3, 1e4}`, 16-mode lattice.
pub const OMEGA_LOWER_C1: f64 = 860.0;
/// Upper constant for `||J||_S lam^{2 delta}`; measured at most 51.8 on the
/// same grid.
pub const J_UPPER_C2: f64 = 78.0;
pub const MAX_STEPS_ACCEPTED: usize = 8;

#[derive(Clone, Debug, Default, Serialize)]
pub struct TraceRow {
    pub step: usize,
    pub truncation: f64,
    pub gamma_n: f64,
    pub residual_s0: f64,
    pub residual_high: f64,
    pub state_high: f64,
    pub step_norm: f64,
    pub melnikov_pass: bool,
    pub melnikov_min_divisor: f64,
}

impl From<&IterationRecord> for TraceRow {
    fn from(r: &IterationRecord) -> Self {
        Self {
            step: r.step,
            truncation: r.truncation,
            gamma_n: r.gamma_n,
            residual_s0: r.residual_s0,
            residual_high: r.residual_high,
            state_high: r.state_high,
            step_norm: r.step_norm,
            melnikov_pass: r.melnikov_pass,
            melnikov_min_divisor: r.melnikov_min_divisor,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveResults {
    pub lam: f64,
    pub omega: [f64; 2],
    pub gamma: f64,
    pub initial_residual: f64,
    pub final_residual: f64,
    pub steps: usize,
    pub converged: bool,
    pub decay_fit: Option<LinearFit>,
    pub decay_exponent: Option<f64>,
    pub envelope: Option<Envelope>,
    pub asymptotic_regime: bool,
    pub nondegeneracy: NondegeneracyReport,
    pub physical: PhysicalReport,
}

pub(crate) struct Solved {
    pub outcome: NmOutcome,
    pub results: SolveResults,
}

/// Runs the iteration at `lam`; a failed run returns its partial trace.
pub(crate) fn solve_at(
    rc: &ResolvedConfig,
    lam: f64,
    w: [f64; 2],
) -> Result<Solved, (CliError, Vec<IterationRecord>)> {
    let c = &rc.config;
    let stage = format!("solve[lam={lam}]");
    let plain = |e: CliError| (e, Vec::new());
    let p = c.params_at(lam).map_err(plain)?;
    let g = gamma(rc, &p);
    let f = forcing(rc, c.lattice.lattice(), &p).map_err(plain)?;
    let pr = Problem::new(p, w, f, g);
    let nm = tk_nash_moser::NMConfig {
        delta: p.delta,
        ..rc.nm.clone()
    };
    let outcome = run_iteration(&pr, &nm, c.backend).map_err(|e| {
        let trace = e.trace().map(<[_]>::to_vec).unwrap_or_default();
        (CliError::numeric(stage.clone(), e), trace)
    })?;
    let nondegeneracy = nondegeneracy_check(&outcome.final_state, &outcome.approx, &pr.forcing, &p, DEFAULT_S_HIGH);
    let (_, physical) = reconstruct_physical(&outcome.final_state, &pr.forcing.f, &p, DEFAULT_S_HIGH)
        .map_err(|e| plain(CliError::numeric(stage.clone(), e)))?;
    let results = SolveResults {
        lam,
        omega: w,
        gamma: g,
        initial_residual: outcome.initial_residual,
        final_residual: outcome.trace.last().map_or(outcome.initial_residual, |r| r.residual_s0),
        steps: outcome.trace.len(),
        converged: outcome.converged,
        decay_fit: outcome.decay_fit,
        decay_exponent: outcome.decay_exponent,
        envelope: outcome.envelope.clone(),
        asymptotic_regime: outcome.asymptotic_regime,
        nondegeneracy,
        physical,
    };
    Ok(Solved { outcome, results })
}

fn write_trace(out: &mut Output, trace: &[IterationRecord]) -> Result<(), CliError> {
    let rows: Vec<TraceRow> = trace.iter().map(TraceRow::from).collect();
    out.write_csv("trace", &rows)?;
    let mut buf = Vec::new();
    write_trace_jsonl(trace, &mut buf).map_err(|e| CliError::numeric("trace", e))?;
    out.write_text("trace", "jsonl", &buf)
}

pub(crate) fn run(rc: &ResolvedConfig, out: &mut Output) -> Result<Summary, CliError> {
    let w = omega(rc)?;
    let lam = rc.config.phys.lam;
    let solved = match solve_at(rc, lam, w) {
        Ok(s) => s,
        Err((e, trace)) => {
            write_trace(out, &trace)?;
            let partial: Vec<TraceRow> = trace.iter().map(TraceRow::from).collect();
            return out.fail(e, serde_json::json!({ "omega": w, "trace": partial }));
        }
    };
    write_trace(out, &solved.outcome.trace)?;
    let r = &solved.results;
    let trace = &solved.outcome.trace;
    let decreasing = trace
        .iter()
        .scan(r.initial_residual, |last, t| {
            let ok = t.residual_s0 < *last;
            *last = t.residual_s0;
            Some(ok)
        })
        .all(|b| b);
    let affine = r.decay_fit.is_some_and(|f| f.slope < 0.0 && f.r2 >= 0.9);
    let checks = checks([
        ("converged", r.converged && r.steps <= MAX_STEPS_ACCEPTED),
        ("residual_decreasing", decreasing),
        ("log_residual_affine_in_chi_n", affine && decreasing),
        ("melnikov_all_steps", trace.iter().all(|t| t.melnikov_pass)),
        ("j_upper_bound", r.nondegeneracy.j_scaled <= J_UPPER_C2),
        ("omega_lower_bound", r.nondegeneracy.omega_scaled >= OMEGA_LOWER_C1),
        ("b_grad_lower_bound", r.nondegeneracy.b_grad_ok),
    ]);
    out.finish(checks, &solved.results)
}
