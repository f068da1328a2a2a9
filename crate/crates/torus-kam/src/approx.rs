//! Size and residual of the approximate solution over a `lam`-grid.

use rayon::prelude::*;
use serde::Serialize;
use tk_nash_moser::{build_approx_solution, nondegeneracy_check, Problem};

use crate::common::{checks, dio_params, forcing, gamma, loglog, omega, Slope};
use crate::{CliError, Output, ResolvedConfig, Summary};

#[derive(Clone, Debug, Default, Serialize)]
pub struct ApproxRow {
    pub lam: f64,
    pub gamma: f64,
    pub omega_norm_s0: f64,
    /// `||Omega_app||_{s0} lam^{2 delta/3}`.
    pub omega_scaled: f64,
    pub residual_s0: f64,
    /// `||F(I_app)||_{s0} lam^{delta/3} gamma^2`.
    pub residual_scaled: f64,
    pub b_grad_l2: f64,
    /// `||b.grad Omega_app||_{L^2} lam^{2 delta/3}`.
    pub b_grad_scaled: f64,
    pub k_half: f64,
}

#[derive(Clone, Debug, Serialize)]
struct ApproxResults {
    omega: [f64; 2],
    omega_slope: Slope,
    residual_slope: Slope,
    min_b_grad_margin: f64,
}

pub fn rows(rc: &ResolvedConfig, w: [f64; 2]) -> Result<Vec<ApproxRow>, CliError> {
    let c = &rc.config;
    let lat = c.lattice.lattice();
    let s0 = rc.nm.s0;
    c.lambda_grid
        .par_iter()
        .map(|&lam| {
            let stage = |e| CliError::numeric(format!("approx[lam={lam}]"), e);
            let p = c.params_at(lam)?;
            let g = gamma(rc, &p);
            let pr = Problem::new(p, w, forcing(rc, lat, &p)?, g);
            let app = build_approx_solution(&pr.forcing, &p, w, &dio_params(g, c.dio.tau, c.dio.k_check)?)
                .map_err(stage)?;
            let res = pr.residual(&app).map_err(stage)?.sobolev_norm(s0);
            let nd = nondegeneracy_check(&app, &app, &pr.forcing, &p, s0);
            let d = p.delta;
            Ok(ApproxRow {
                lam,
                gamma: g,
                omega_norm_s0: nd.omega_norm,
                omega_scaled: nd.omega_scaled,
                residual_s0: res,
                residual_scaled: res * lam.powf(d / 3.0) * g * g,
                b_grad_l2: nd.b_grad_omega,
                b_grad_scaled: nd.b_grad_omega * lam.powf(2.0 * d / 3.0),
                k_half: pr.forcing.k_const / 2.0,
            })
        })
        .collect()
}

pub(crate) fn run(rc: &ResolvedConfig, out: &mut Output) -> Result<Summary, CliError> {
    let w = omega(rc)?;
    let rows = match rows(rc, w) {
        Ok(r) => r,
        Err(e) => return out.fail(e, serde_json::json!({ "omega": w })),
    };
    out.write_csv("grid", &rows)?;
    let delta = rc.nm.delta;
    let lams: Vec<f64> = rows.iter().map(|r| r.lam).collect();
    let col = |f: fn(&ApproxRow) -> f64| rows.iter().map(f).collect::<Vec<_>>();
    let (omega_slope, residual_slope) = if rows.len() >= 2 {
        (
            loglog(&lams, &col(|r| r.omega_norm_s0), -2.0 * delta / 3.0, 0.05),
            loglog(&lams, &col(|r| r.residual_s0), -delta / 3.0, 0.05),
        )
    } else {
        let nan = Slope {
            slope: f64::NAN,
            target: 0.0,
            tolerance: 0.0,
        };
        (nan, nan)
    };
    let min_b_grad_margin = rows.iter().map(|r| r.b_grad_scaled / r.k_half).fold(f64::INFINITY, f64::min);
    let checks = checks([
        ("omega_slope", omega_slope.within()),
        ("residual_slope", residual_slope.at_most()),
        ("b_grad_lower_bound", min_b_grad_margin >= 1.0),
    ]);
    out.finish(
        checks,
        ApproxResults {
            omega: w,
            omega_slope,
            residual_slope,
            min_b_grad_margin,
        },
    )
}
