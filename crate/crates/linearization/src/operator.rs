use tk_mhd::{bilinear_h, PhysParams};
use tk_spectral::{
    advect, biot_savart, dot, norm_sq, Complex64, Lattice, StatePair, TorusField, VectorField2,
};

use crate::LinError;

#[derive(Clone, Debug)]
pub struct LinearizedOperator {
    /// `a = lam^delta BS(Omega)`.
    pub a_field: VectorField2,
    /// `d = -b - lam^delta BS(J)`.
    pub d_field: VectorField2,
    pub params: PhysParams,
    pub omega: [f64; 2],
    pub base_state: StatePair,
    /// `BS(Omega)`, `BS(J)` of the base state, unscaled.
    u_base: VectorField2,
    b_base: VectorField2,
}

/// Builds the coefficient fields of `DF(state)`.
pub fn assemble(state: &StatePair, params: &PhysParams, omega: [f64; 2]) -> Result<LinearizedOperator, LinError> {
    let u_base = biot_savart(&state.omega_field)?;
    let b_base = biot_savart(&state.current_field)?;
    let amp = params.amp();
    let lat = state.lattice();
    let a_field = u_base.scale(amp);
    let d_field = VectorField2::constant(lat, [-params.b_avg[0], -params.b_avg[1]]).sub(&b_base.scale(amp));
    Ok(LinearizedOperator {
        a_field,
        d_field,
        params: *params,
        omega,
        base_state: state.clone(),
        u_base,
        b_base,
    })
}

impl LinearizedOperator {
    pub fn lattice(&self) -> Lattice {
        self.base_state.lattice()
    }

    fn amp(&self) -> f64 {
        self.params.amp()
    }

    /// `lam omega . grad u`.
    pub fn transport(&self, u: &TorusField) -> TorusField {
        let lam = self.params.lam;
        TorusField::from_fn(u.lattice(), |k| Complex64::new(0.0, lam * dot(self.omega, k)) * u.coeff(k))
    }

    /// `L_lam u = (lam omega . grad - Lap) u`.
    pub fn heat(&self, u: &TorusField) -> TorusField {
        let lam = self.params.lam;
        TorusField::from_fn(u.lattice(), |k| {
            Complex64::new(norm_sq(k), lam * dot(self.omega, k)) * u.coeff(k)
        })
    }

    pub fn a_grad(&self, u: &TorusField) -> Result<TorusField, LinError> {
        Ok(advect(&self.a_field, u)?)
    }

    pub fn d_grad(&self, u: &TorusField) -> Result<TorusField, LinError> {
        Ok(advect(&self.d_field, u)?)
    }

    pub fn r1(&self, h_om: &TorusField) -> Result<TorusField, LinError> {
        let v = biot_savart(h_om)?;
        Ok(advect(&v, &self.base_state.omega_field)?.scale(self.amp()))
    }

    pub fn r2(&self, h_j: &TorusField) -> Result<TorusField, LinError> {
        let v = biot_savart(h_j)?;
        Ok(advect(&v, &self.base_state.current_field)?.scale(-self.amp()))
    }

    pub fn r3(&self, h_om: &TorusField) -> Result<TorusField, LinError> {
        let v = biot_savart(h_om)?;
        let t = advect(&v, &self.base_state.current_field)?;
        let h = bilinear_h(&v, &self.b_base)?;
        Ok((&t - &h.scale(2.0)).scale(self.amp()))
    }

    pub fn r4(&self, h_j: &TorusField) -> Result<TorusField, LinError> {
        let v = biot_savart(h_j)?;
        let t = advect(&v, &self.base_state.omega_field)?;
        let h = bilinear_h(&self.u_base, &v)?;
        Ok((&t + &h.scale(2.0)).scale(-self.amp()))
    }

    /// `L_11 = L_lam + a.grad + R1`.
    pub fn block11(&self, u: &TorusField) -> Result<TorusField, LinError> {
        Ok(&(&self.heat(u) + &self.a_grad(u)?) + &self.r1(u)?)
    }

    /// `L_12 = d.grad + R2`.
    pub fn block12(&self, u: &TorusField) -> Result<TorusField, LinError> {
        Ok(&self.d_grad(u)? + &self.r2(u)?)
    }

    /// `L_21 = d.grad + R3`.
    pub fn block21(&self, u: &TorusField) -> Result<TorusField, LinError> {
        Ok(&self.d_grad(u)? + &self.r3(u)?)
    }

    /// `L_22 = lam w.grad + a.grad + R4`.
    pub fn block22(&self, u: &TorusField) -> Result<TorusField, LinError> {
        Ok(&(&self.transport(u) + &self.a_grad(u)?) + &self.r4(u)?)
    }

    pub fn apply(&self, h: &StatePair) -> Result<StatePair, LinError> {
        let (om, j) = (&h.omega_field, &h.current_field);
        Ok(StatePair {
            omega_field: &self.block11(om)? + &self.block12(j)?,
            current_field: &self.block21(om)? + &self.block22(j)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_state_coefficients() {
        let lat = Lattice::new(4);
        let p = PhysParams::default();
        let l = assemble(&StatePair::zeros(lat), &p, [1.0, 1.5]).unwrap();
        assert_eq!(l.a_field.sobolev_norm(0.0), 0.0);
        assert_eq!(l.d_field.c1.coeff([0, 0]).re, -p.b_avg[0]);
        assert_eq!(l.d_field.c2.coeff([0, 0]).re, -p.b_avg[1]);
        let u = TorusField::cos_mode(lat, [1, 2], 1.0);
        for r in [l.r1(&u), l.r2(&u), l.r3(&u), l.r4(&u)] {
            assert_eq!(r.unwrap().max_abs_coeff(), 0.0);
        }
    }
}
