use serde::Serialize;
use tk_mhd::{evaluate_f, PhysParams};
use tk_spectral::{StatePair, TorusField};

use crate::{assemble, LinError};

/// Remainders `||F(I + e h) - F(I) - e L h||_s` over a halving sequence of `e`.
#[derive(Clone, Debug, Serialize)]
pub struct TaylorReport {
    pub eps: Vec<f64>,
    pub remainders: Vec<f64>,
    /// `r(e_i) / r(e_{i+1})`; about 4 for a second-order remainder.
    pub ratios: Vec<f64>,
    pub pass: bool,
}

/// Second-order Taylor test of `L = DF(state)` in direction `h`.
/// Passes when every consecutive ratio lies in `4 (1 +- tol)`.
#[allow(clippy::too_many_arguments)]
pub fn taylor_check(
    state: &StatePair,
    h: &StatePair,
    params: &PhysParams,
    omega: [f64; 2],
    forcing_curl: &TorusField,
    eps: &[f64],
    s: f64,
    tol: f64,
) -> Result<TaylorReport, LinError> {
    let op = assemble(state, params, omega)?;
    let lh = op.apply(h)?;
    let f0 = evaluate_f(state, params, omega, forcing_curl)?;
    let remainders = eps
        .iter()
        .map(|&e| {
            let fe = evaluate_f(&state.add(&h.scale(e)), params, omega, forcing_curl)?;
            Ok(fe.sub(&f0).sub(&lh.scale(e)).sobolev_norm(s))
        })
        .collect::<Result<Vec<_>, LinError>>()?;
    let ratios: Vec<f64> = remainders.windows(2).map(|w| w[0] / w[1]).collect();
    let pass = ratios.iter().all(|r| (r / 4.0 - 1.0).abs() <= tol);
    Ok(TaylorReport {
        eps: eps.to_vec(),
        remainders,
        ratios,
        pass,
    })
}
