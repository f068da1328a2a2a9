//! Converged states over a `lam`-grid and the sizes of the physical fields
//! `(U, B, P)` rebuilt from them.

use rayon::prelude::*;
use serde::Serialize;

use crate::common::{checks, loglog, omega, Slope};
use crate::solve::{solve_at, SolveResults, J_UPPER_C2, OMEGA_LOWER_C1};
use crate::{CliError, Output, ResolvedConfig, Summary};

pub const PRESSURE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, Default, Serialize)]
pub struct ScalingRow {
    pub lam: f64,
    pub gamma: f64,
    pub steps: usize,
    pub converged: bool,
    pub final_residual: f64,
    pub omega_norm: f64,
    pub omega_scaled: f64,
    pub j_norm: f64,
    pub j_scaled: f64,
    pub u_norm: f64,
    pub b_norm: f64,
    pub p_norm: f64,
    pub pressure_residual: f64,
}

impl From<&SolveResults> for ScalingRow {
    fn from(r: &SolveResults) -> Self {
        Self {
            lam: r.lam,
            gamma: r.gamma,
            steps: r.steps,
            converged: r.converged,
            final_residual: r.final_residual,
            omega_norm: r.nondegeneracy.omega_norm,
            omega_scaled: r.nondegeneracy.omega_scaled,
            j_norm: r.nondegeneracy.j_norm,
            j_scaled: r.nondegeneracy.j_scaled,
            u_norm: r.physical.u_norm,
            b_norm: r.physical.b_norm,
            p_norm: r.physical.p_norm,
            pressure_residual: r.physical.pressure_residual,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
struct ScalingResults {
    omega: [f64; 2],
    u_slope: Slope,
    b_slope: Slope,
    p_slope: Slope,
    omega_slope: Slope,
    max_pressure_residual: f64,
}

pub(crate) fn run(rc: &ResolvedConfig, out: &mut Output) -> Result<Summary, CliError> {
    let w = omega(rc)?;
    let results: Vec<_> = rc
        .config
        .lambda_grid
        .par_iter()
        .map(|&lam| solve_at(rc, lam, w).map(|s| s.results))
        .collect();
    let rows: Vec<ScalingRow> = results.iter().flatten().map(ScalingRow::from).collect();
    out.write_csv("grid", &rows)?;
    if let Some(Err((e, _))) = results.into_iter().find(Result::is_err) {
        return out.fail(e, serde_json::json!({ "omega": w }));
    }

    let eta = rc.config.phys.eta;
    let delta = rc.nm.delta;
    let lams: Vec<f64> = rows.iter().map(|r| r.lam).collect();
    let col = |f: fn(&ScalingRow) -> f64| rows.iter().map(f).collect::<Vec<_>>();
    let u_slope = loglog(&lams, &col(|r| r.u_norm), 3.0 * eta, 0.05);
    let b_slope = loglog(&lams, &col(|r| r.b_norm), -3.0 * eta, 0.05);
    let p_slope = loglog(&lams, &col(|r| r.p_norm), 1.0 + eta, 0.05);
    let omega_slope = loglog(&lams, &col(|r| r.omega_norm), -2.0 * delta / 3.0, 0.05);
    let max_pressure_residual = rows.iter().map(|r| r.pressure_residual).fold(0.0, f64::max);
    let checks = checks([
        ("all_converged", rows.iter().all(|r| r.converged)),
        ("pressure_equation", max_pressure_residual <= PRESSURE_TOL),
        ("u_slope", u_slope.within()),
        ("b_slope_upper", b_slope.at_most()),
        ("p_slope", p_slope.within()),
        ("j_upper_bound", rows.iter().all(|r| r.j_scaled <= J_UPPER_C2)),
        ("omega_lower_bound", rows.iter().all(|r| r.omega_scaled >= OMEGA_LOWER_C1)),
    ]);
    out.finish(
        checks,
        ScalingResults {
            omega: w,
            u_slope,
            b_slope,
            p_slope,
            omega_slope,
            max_pressure_residual,
        },
    )
}
