use serde::{Deserialize, Serialize};
use tk_spectral::{advect, biot_savart, div, inv_laplacian, StatePair, TorusField, VectorField2};

use crate::{MhdError, PhysParams};

/// `(V . grad) V` componentwise.
fn self_advection(v: &VectorField2) -> Result<VectorField2, MhdError> {
    Ok(VectorField2::new(advect(v, &v.c1)?, advect(v, &v.c2)?)?)
}

/// Zero-average solution of
/// `Lap P = lam^{1+eta} div f + div[(B.grad)B] - div[(U.grad)U]`.
pub fn recover_pressure(
    u: &VectorField2,
    b: &VectorField2,
    f: &VectorField2,
    p: &PhysParams,
) -> Result<TorusField, MhdError> {
    let rhs = pressure_rhs(u, b, f, p)?;
    Ok(inv_laplacian(&rhs)?)
}

pub(crate) fn pressure_rhs(
    u: &VectorField2,
    b: &VectorField2,
    f: &VectorField2,
    p: &PhysParams,
) -> Result<TorusField, MhdError> {
    let lat = u.lattice();
    let forcing = div(&f.resample(lat)).scale(p.lam.powf(1.0 + p.eta));
    let bb = div(&self_advection(b)?);
    let uu = div(&self_advection(u)?);
    Ok(&(&forcing + &bb) - &uu)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalFields {
    pub u: VectorField2,
    pub b: VectorField2,
    pub p: TorusField,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalReport {
    pub lam: f64,
    pub s: f64,
    pub u_norm: f64,
    pub b_norm: f64,
    pub p_norm: f64,
    /// `max |Lap P - rhs| / max |rhs|`.
    pub pressure_residual: f64,
    pub div_u: f64,
    pub div_b: f64,
}

/// `U = lam^delta BS(Omega)`, `B = lam^delta BS(J)` and the pressure.
pub fn reconstruct_physical(
    state: &StatePair,
    f: &VectorField2,
    p: &PhysParams,
    s: f64,
) -> Result<(PhysicalFields, PhysicalReport), MhdError> {
    let amp = p.amp();
    let u = biot_savart(&state.omega_field)?.scale(amp);
    let b = biot_savart(&state.current_field)?.scale(amp);
    let rhs = pressure_rhs(&u, &b, f, p)?;
    let pr = inv_laplacian(&rhs)?;
    let lap = tk_spectral::laplacian(&pr);
    let residual = (&lap - &rhs).max_abs_coeff() / rhs.max_abs_coeff().max(f64::MIN_POSITIVE);
    let report = PhysicalReport {
        lam: p.lam,
        s,
        u_norm: u.sobolev_norm(s),
        b_norm: b.sobolev_norm(s),
        p_norm: pr.sobolev_norm(s),
        pressure_residual: residual,
        div_u: div(&u).max_abs_coeff(),
        div_b: div(&b).max_abs_coeff(),
    };
    Ok((PhysicalFields { u, b, p: pr }, report))
}
