use tk_diophantine::{invert_l_lambda, is_diophantine, DioError, DioParams};
use tk_mhd::{evaluate_f, forcing_scale, ForcingSpec, PhysParams};
use tk_spectral::{StatePair, TorusField};

use crate::NmError;

/// Everything fixed during one run.
#[derive(Clone, Debug)]
pub struct Problem {
    pub params: PhysParams,
    pub omega: [f64; 2],
    pub forcing: ForcingSpec,
    pub gamma: f64,
}

impl Problem {
    pub fn new(params: PhysParams, omega: [f64; 2], forcing: ForcingSpec, gamma: f64) -> Self {
        Self {
            params,
            omega,
            forcing,
            gamma,
        }
    }

    pub fn residual(&self, state: &StatePair) -> Result<StatePair, NmError> {
        Ok(evaluate_f(state, &self.params, self.omega, &self.forcing.f_curl)?)
    }
}

/// `Omega_app = lam^{1 - 2 delta/3} L_lam^{-1} F`, `J_app = 0`, after checking
/// that `omega` satisfies the condition in `dio`.
pub fn build_approx_solution(
    forcing: &ForcingSpec,
    params: &PhysParams,
    omega: [f64; 2],
    dio: &DioParams,
) -> Result<StatePair, NmError> {
    let check = is_diophantine(omega, dio);
    if !check.ok {
        return Err(NmError::Resonance(check.argmin));
    }
    let rhs = forcing.f_curl.scale(forcing_scale(params));
    let om = invert_l_lambda(omega, params.lam, &rhs).map_err(|e| match e {
        DioError::Resonance(k) => NmError::Resonance(k),
        DioError::Spectral(e) => NmError::Spectral(e),
        DioError::Param(m) => NmError::Config(m),
    })?;
    Ok(StatePair {
        current_field: TorusField::zeros(om.lattice()),
        omega_field: om,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use tk_mhd::{build_forcing, ForcingModes, ModeEntry};
    use tk_spectral::{Complex64, Lattice};

    #[test]
    fn single_cosine_forcing_diagonal_formula() {
        // f = (0, 2 sin x_1) gives F = 2 cos x_1
        let lat = Lattice::new(4);
        let modes = ForcingModes {
            c1: vec![],
            c2: vec![
                ModeEntry { k: [1, 0], re: 0.0, im: -1.0 },
                ModeEntry { k: [-1, 0], re: 0.0, im: 1.0 },
            ],
        };
        let forcing = build_forcing(lat, &modes, [1.0, 0.0]).unwrap();
        let p = PhysParams::default();
        let w = [1.3, 1.7];
        let dio = DioParams::new(0.01, 2.0, 20).unwrap();
        let app = build_approx_solution(&forcing, &p, w, &dio).unwrap();
        let half = forcing.f_curl.coeff([1, 0]);
        let want = forcing_scale(&p) * half / Complex64::new(1.0, p.lam * w[0]);
        assert!((app.omega_field.coeff([1, 0]) - want).norm() <= 1e-15 * want.norm());
        assert_eq!(app.current_field.max_abs_coeff(), 0.0);
    }

    #[test]
    fn resonant_frequency_rejected() {
        let lat = Lattice::new(4);
        let forcing = build_forcing(lat, &tk_mhd::default_forcing_modes(), PhysParams::DEFAULT_B).unwrap();
        let dio = DioParams::new(0.01, 2.0, 20).unwrap();
        let e = build_approx_solution(&forcing, &PhysParams::default(), [1.0, 1.0], &dio).unwrap_err();
        assert!(matches!(e, NmError::Resonance(_)));
    }
}
