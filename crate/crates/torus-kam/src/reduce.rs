//! The reduction chain against the dense Galerkin solve, the off-diagonal
//! growth drop of one decoupling step, and the heat-inverse gain.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use tk_diophantine::{gain_sup, invert_l_lambda, LinearFit};
use tk_linearization::{assemble, galerkin_matrix, galerkin_solve, ModeSpace};
use tk_mhd::{forcing_scale, PhysParams};
use tk_reduction::{invert_linearized_paper_path, offdiag_growth, ReductionConfig};
use tk_spectral::{norm, Complex64, Lattice, StatePair, TorusField};

use crate::common::{checks, forcing, loglog, omega, Slope};
use crate::{CliError, Output, ResolvedConfig, Summary};

pub const GALERKIN_AGREEMENT: f64 = 1e-6;

#[derive(Clone, Debug, Default, Serialize)]
pub struct ChainRow {
    pub state: String,
    pub dim: usize,
    pub decouple_steps: usize,
    pub heat_contraction: f64,
    pub alpha_iterations: usize,
    pub lower_steps: usize,
    pub melnikov_min_divisor: f64,
    pub z_max: f64,
    pub end_to_end_residual: f64,
    /// `||h_chain - h_galerkin||_{s0} / ||h_galerkin||_{s0}`.
    pub galerkin_rel_diff: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct GrowthRow {
    pub k1: i32,
    pub k2: i32,
    pub k_norm: f64,
    pub before: f64,
    pub after: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct GainRow {
    pub lam: f64,
    pub gain_sup: f64,
}

#[derive(Clone, Debug, Serialize)]
struct Growth {
    fit_before: LinearFit,
    fit_after: LinearFit,
    exp_terms: usize,
}

#[derive(Clone, Debug, Serialize)]
struct ReduceResults {
    lam: f64,
    omega: [f64; 2],
    max_galerkin_rel_diff: f64,
    growth: Option<Growth>,
    gain_slope: Slope,
}

fn approx_state(rc: &ResolvedConfig, lat: Lattice, p: &PhysParams, w: [f64; 2]) -> Result<StatePair, CliError> {
    let f = forcing(rc, lat, p)?;
    let om = invert_l_lambda(w, p.lam, &f.f_curl.scale(forcing_scale(p))).map_err(|e| {
        CliError::Invalid(format!("frequency {w:?} is resonant on the lattice: {e}"))
    })?;
    Ok(StatePair {
        omega_field: om,
        current_field: TorusField::zeros(lat),
    })
}

/// The approximate solution plus a band-3 perturbation of size `amp` in
/// both components.
fn perturbed_state(
    rc: &ResolvedConfig,
    lat: Lattice,
    p: &PhysParams,
    w: [f64; 2],
    amp: f64,
) -> Result<StatePair, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(rc.config.seed ^ 0x5eed);
    let base = approx_state(rc, lat, p, w)?;
    let dom = TorusField::random_smooth(lat, &mut rng, 3, 2.0).scale(amp);
    let dj = TorusField::random_smooth(lat, &mut rng, 3, 2.0).scale(amp);
    Ok(StatePair {
        omega_field: &base.omega_field + &dom,
        current_field: dj,
    })
}

fn real_rhs(lat: Lattice, radius: f64, seed: u64) -> Result<StatePair, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sp = ModeSpace::new(lat, radius).map_err(|e| CliError::numeric("rhs", e))?;
    let v: Vec<Complex64> = (0..sp.dim())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let raw = sp.embed(&v);
    Ok(StatePair {
        omega_field: raw.omega_field.real_part(),
        current_field: raw.current_field.real_part(),
    })
}

fn chain_row(
    name: &str,
    state: &StatePair,
    p: &PhysParams,
    w: [f64; 2],
    cfg: &ReductionConfig,
    rhs: &StatePair,
    s0: f64,
) -> Result<ChainRow, CliError> {
    let stage = |e: tk_nash_moser::NmError| CliError::numeric(format!("reduce[{name}]"), e);
    let op = assemble(state, p, w).map_err(|e| stage(e.into()))?;
    let (h, rep) = invert_linearized_paper_path(&op, rhs, cfg).map_err(|e| stage(e.into()))?;
    let gm = galerkin_matrix(&op, cfg.n_trunc).map_err(|e| stage(e.into()))?;
    let reference = galerkin_solve(&gm, rhs).map_err(|e| stage(e.into()))?;
    Ok(ChainRow {
        state: name.into(),
        dim: rep.dim,
        decouple_steps: rep.decouple_steps,
        heat_contraction: rep.heat_contraction,
        alpha_iterations: rep.alpha_iterations,
        lower_steps: rep.lower_steps,
        melnikov_min_divisor: rep.melnikov_min_divisor,
        z_max: rep.z_max,
        end_to_end_residual: rep.end_to_end_residual.unwrap_or(f64::NAN),
        galerkin_rel_diff: h.sub(&reference).sobolev_norm(s0) / reference.sobolev_norm(s0),
    })
}

pub(crate) fn run(rc: &ResolvedConfig, out: &mut Output) -> Result<Summary, CliError> {
    let c = &rc.config;
    let rcfg = &c.reduce;
    let lat = c.lattice.lattice();
    let w = omega(rc)?;
    let p = c.params_at(c.phys.lam)?;
    let cfg = ReductionConfig {
        n_trunc: rcfg.n_trunc,
        gamma: rcfg.gamma,
        tau: c.dio.tau,
        k_check: c.dio.k_check,
        smallness_eps: rc.nm.smallness_eps,
        sigma_bar: rc.nm.sigma_bar,
        ..ReductionConfig::default()
    };
    let rhs = real_rhs(lat, rcfg.n_trunc, c.seed)?;
    let states = [
        ("base", StatePair::zeros(lat)),
        ("approx", approx_state(rc, lat, &p, w)?),
        ("perturbed", perturbed_state(rc, lat, &p, w, rcfg.perturbation)?),
    ];
    let mut rows = Vec::new();
    for (name, st) in &states {
        match chain_row(name, st, &p, w, &cfg, &rhs, rc.nm.s0) {
            Ok(r) => rows.push(r),
            Err(e) => {
                out.write_csv("chain", &rows)?;
                return out.fail(e, serde_json::json!({ "omega": w }));
            }
        }
    }
    out.write_csv("chain", &rows)?;

    let growth = if rcfg.growth_lattice > 0 {
        let glat = Lattice::new(rcfg.growth_lattice).with_engine(c.lattice.engine);
        let st = perturbed_state(rc, glat, &p, w, rcfg.growth_perturbation)?;
        let op = assemble(&st, &p, w).map_err(|e| CliError::numeric("growth", e))?;
        let g = offdiag_growth(&op, &rcfg.growth_modes).map_err(|e| CliError::numeric("growth", e))?;
        let grows: Vec<GrowthRow> = g
            .modes
            .iter()
            .zip(g.before.iter().zip(&g.after))
            .map(|(&k, (&before, &after))| GrowthRow {
                k1: k[0],
                k2: k[1],
                k_norm: norm(k),
                before,
                after,
            })
            .collect();
        out.write_csv("growth", &grows)?;
        Some(Growth {
            fit_before: g.fit_before,
            fit_after: g.fit_after,
            exp_terms: g.exp_terms,
        })
    } else {
        None
    };

    let gains: Vec<GainRow> = rcfg
        .gain_lambdas
        .par_iter()
        .map(|&lam| GainRow {
            lam,
            gain_sup: gain_sup(w, lam, rcfg.gain_radius),
        })
        .collect();
    out.write_csv("gain", &gains)?;
    let expo = 1.0 / (c.dio.tau + 2.0) - 0.01;
    let gain_slope = loglog(
        &gains.iter().map(|g| g.lam).collect::<Vec<_>>(),
        &gains.iter().map(|g| g.gain_sup).collect::<Vec<_>>(),
        -expo,
        0.05,
    );

    let max_diff = rows.iter().map(|r| r.galerkin_rel_diff).fold(0.0, f64::max);
    let mut checks = checks([
        ("chain_matches_galerkin", max_diff <= GALERKIN_AGREEMENT),
        ("gain_slope", gains.len() >= 2 && gain_slope.at_most()),
    ]);
    if let Some(g) = &growth {
        checks.insert("growth_before_order_one".into(), (g.fit_before.slope - 1.0).abs() <= 0.05);
        checks.insert("growth_after_drop".into(), g.fit_after.slope <= 0.6);
    }
    out.finish(
        checks,
        ReduceResults {
            lam: p.lam,
            omega: w,
            max_galerkin_rel_diff: max_diff,
            growth,
            gain_slope,
        },
    )
}
