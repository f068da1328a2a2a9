use serde::{Deserialize, Serialize};
use tk_diophantine::apply_directional;
use tk_mhd::{ForcingSpec, PhysParams};
use tk_spectral::StatePair;

/// Lower bounds that keep `Omega` and `J` away from zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NondegeneracyReport {
    pub lam: f64,
    pub s: f64,
    pub omega_norm: f64,
    /// `||Omega||_s lam^{2 delta/3}`.
    pub omega_scaled: f64,
    /// `||b . grad Omega||_{L^2}`.
    pub b_grad_omega: f64,
    /// `(K/2) lam^{-2 delta/3}`.
    pub b_grad_bound: f64,
    pub b_grad_ok: bool,
    pub j_norm: f64,
    /// `||J||_s lam^{2 delta}`.
    pub j_scaled: f64,
    pub j_nonzero: bool,
    /// `||Omega - Omega_app||_{s}`.
    pub omega_perturbation: f64,
}

/// Report-only: evaluates the bounds for `state` against the approximate
/// solution `approx`.
pub fn nondegeneracy_check(
    state: &StatePair,
    approx: &StatePair,
    forcing: &ForcingSpec,
    params: &PhysParams,
    s: f64,
) -> NondegeneracyReport {
    let om = &state.omega_field;
    let j = &state.current_field;
    let lam = params.lam;
    let scale = lam.powf(2.0 * params.delta / 3.0);
    let b_grad_omega = apply_directional(params.b_avg, 1.0, om).l2_norm();
    let b_grad_bound = 0.5 * forcing.k_const / scale;
    let j_norm = j.sobolev_norm(s);
    NondegeneracyReport {
        lam,
        s,
        omega_norm: om.sobolev_norm(s),
        omega_scaled: om.sobolev_norm(s) * scale,
        b_grad_omega,
        b_grad_bound,
        b_grad_ok: b_grad_omega >= b_grad_bound,
        j_norm,
        j_scaled: j_norm * lam.powf(2.0 * params.delta),
        j_nonzero: j_norm > 0.0,
        omega_perturbation: (om - &approx.omega_field).sobolev_norm(s),
    }
}
