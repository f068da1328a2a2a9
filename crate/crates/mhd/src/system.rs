use tk_spectral::{
    advect, biot_savart, dot, partial, Complex64, StatePair, TorusField,
    VectorField2,
};

use crate::{MhdError, PhysParams};

/// `H(U,B) = d_1 B . grad U_2 - d_2 B . grad U_1`.
pub fn bilinear_h(u: &VectorField2, b: &VectorField2) -> Result<TorusField, MhdError> {
    let d1b = b.map(|c| partial(c, 0));
    let d2b = b.map(|c| partial(c, 1));
    let a = advect(&d1b, &u.c2)?;
    let c = advect(&d2b, &u.c1)?;
    Ok(&a - &c)
}

/// `lam^{1 - 2 delta/3}`, the forcing amplitude of the rescaled system.
pub fn forcing_scale(p: &PhysParams) -> f64 {
    p.lam.powf(1.0 - 2.0 * p.delta / 3.0)
}

/// `u -> v . grad u` for a constant vector `v` (scaled by `s`).
pub(crate) fn const_derivative(v: [f64; 2], s: f64, u: &TorusField) -> TorusField {
    TorusField::from_fn(u.lattice(), |k| Complex64::new(0.0, s * dot(v, k)) * u.coeff(k))
}

/// The residual map `F(Omega, J)`:
///
/// `r_1 = lam w.grad Om - Lap Om - b.grad J + lam^d [U.grad Om - B.grad J] - lam^{1-2d/3} F`,
/// `r_2 = lam w.grad J - b.grad Om + lam^d [U.grad J - B.grad Om - 2 H(U,B)]`,
/// with `U = BS(Om)`, `B = BS(J)`.
pub fn evaluate_f(
    state: &StatePair,
    p: &PhysParams,
    omega: [f64; 2],
    forcing_curl: &TorusField,
) -> Result<StatePair, MhdError> {
    let lat = state.lattice();
    let om = &state.omega_field;
    let j = &state.current_field;
    let u = biot_savart(om)?;
    let b = biot_savart(j)?;
    let amp = p.amp();
    let force = forcing_curl.resample(lat).scale(forcing_scale(p));

    let lin1 = TorusField::from_fn(lat, |k| {
        let heat = Complex64::new((k[0] * k[0] + k[1] * k[1]) as f64, p.lam * dot(omega, k));
        heat * om.coeff(k) - Complex64::new(0.0, dot(p.b_avg, k)) * j.coeff(k)
    });
    let lin2 = &const_derivative(omega, p.lam, j) - &const_derivative(p.b_avg, 1.0, om);

    let n1 = &advect(&u, om)? - &advect(&b, j)?;
    let h = bilinear_h(&u, &b)?;
    let n2 = &(&advect(&u, j)? - &advect(&b, om)?) - &h.scale(2.0);

    let mut r1 = lin1;
    r1.axpy(Complex64::new(amp, 0.0), &n1);
    r1.axpy(Complex64::new(-1.0, 0.0), &force);
    let mut r2 = lin2;
    r2.axpy(Complex64::new(amp, 0.0), &n2);
    Ok(StatePair {
        omega_field: r1,
        current_field: r2,
    })
}
