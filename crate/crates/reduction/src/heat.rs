use tk_spectral::{norm_sq, dot, Complex64, TorusField};

use crate::decouple::DecoupledOperator;
use crate::dense::{
    diag_mat, mat_vec, neumann_inverse, neumann_solve, row_scaled, spectral_norm, CMat, Modes,
};
use crate::{ReductionConfig, ReductionError, Stage, StageExt};

/// Required bound on the measured Neumann factor of the heat block.
pub const HEAT_CONTRACTION_LIMIT: f64 = 0.5;

/// `L^(1) = L_lam (I + P_lam)` with `P_lam = L_lam^{-1} (L^(1) - L_lam)`.
#[derive(Clone, Debug)]
pub struct HeatSplit {
    /// `Lambda(k) = |k|^2 + i lam w.k` on the modes.
    pub lam_diag: Vec<Complex64>,
    pub p: CMat,
    /// `||P_lam||_2`.
    pub contraction: f64,
}

impl HeatSplit {
    pub fn new(d: &DecoupledOperator) -> Result<Self, ReductionError> {
        let lam_diag = d
            .modes
            .diag(|k| Complex64::new(norm_sq(k), d.lam * dot(d.omega, k)));
        let inv: Vec<Complex64> = lam_diag.iter().map(|c| 1.0 / c).collect();
        let rem = &d.heat_block - &diag_mat(&lam_diag);
        let p = row_scaled(&inv, &rem);
        let contraction = spectral_norm(&p)?;
        if !(contraction < HEAT_CONTRACTION_LIMIT) {
            return Err(ReductionError::Contraction(contraction));
        }
        Ok(Self {
            lam_diag,
            p,
            contraction,
        })
    }

    /// Neumann solve of `L^(1) h = rhs`; returns `h` and the number of terms.
    pub fn solve(&self, rhs: &[Complex64], cfg: &ReductionConfig) -> Result<(Vec<Complex64>, usize), ReductionError> {
        let b: Vec<Complex64> = rhs.iter().zip(&self.lam_diag).map(|(r, l)| r / l).collect();
        neumann_solve(|x| mat_vec(&self.p, x), &b, cfg.neumann_tol, cfg.max_neumann_terms)
    }

    /// `(L^(1))^{-1} = (I + P_lam)^{-1} L_lam^{-1}` as a matrix.
    pub fn inverse_matrix(&self, cfg: &ReductionConfig) -> Result<(CMat, usize), ReductionError> {
        let (s, terms) = neumann_inverse(&self.p, cfg.neumann_tol, cfg.max_neumann_terms)?;
        let inv: Vec<Complex64> = self.lam_diag.iter().map(|c| 1.0 / c).collect();
        Ok((&s * &diag_mat(&inv), terms))
    }
}

/// Solves `L_1^(1) h = rhs` on `V_N`.
pub fn invert_heat_block(
    d: &DecoupledOperator,
    rhs: &TorusField,
    cfg: &ReductionConfig,
) -> Result<TorusField, ReductionError> {
    let split = HeatSplit::new(d).at(Stage::Heat)?;
    let (h, _) = split.solve(&d.modes.restrict(rhs), cfg).at(Stage::Heat)?;
    Ok(d.modes.embed_into(&h, rhs.lattice()))
}

/// The Schur complement `P = L^(4) - L^(3) (L^(1))^{-1} L^(2)`.
#[derive(Clone, Debug)]
pub struct SchurReduction {
    pub modes: Modes,
    pub heat: HeatSplit,
    pub heat_inverse: CMat,
    pub heat_terms: usize,
    /// The transport operator `P` on `V_N`.
    pub transport: CMat,
}

pub fn schur_to_transport(d: &DecoupledOperator, cfg: &ReductionConfig) -> Result<SchurReduction, ReductionError> {
    let heat = HeatSplit::new(d).at(Stage::Heat)?;
    let (x, heat_terms) = heat.inverse_matrix(cfg).at(Stage::Heat)?;
    let transport = &d.transport_block - &(&(&d.lower * &x) * &d.upper);
    Ok(SchurReduction {
        modes: d.modes.clone(),
        heat,
        heat_inverse: x,
        heat_terms,
        transport,
    })
}

impl SchurReduction {
    pub fn apply(&self, h: &TorusField) -> TorusField {
        let y = mat_vec(&self.transport, &self.modes.restrict(h));
        self.modes.embed_into(&y, h.lattice())
    }

    /// Solves `L_1 (h1, h2) = (g1, g2)` given a solver for `P`:
    /// `h2 = P^{-1}(g2 - L^(3) X g1)`, `h1 = X (g1 - L^(2) h2)`.
    pub fn solve_system(
        &self,
        d: &DecoupledOperator,
        g1: &[Complex64],
        g2: &[Complex64],
        mut p_inv: impl FnMut(&[Complex64]) -> Result<Vec<Complex64>, ReductionError>,
    ) -> Result<(Vec<Complex64>, Vec<Complex64>), ReductionError> {
        let xg1 = mat_vec(&self.heat_inverse, g1);
        let t = mat_vec(&d.lower, &xg1);
        let r2: Vec<Complex64> = g2.iter().zip(&t).map(|(a, b)| a - b).collect();
        let h2 = p_inv(&r2)?;
        let u = mat_vec(&d.upper, &h2);
        let r1: Vec<Complex64> = g1.iter().zip(&u).map(|(a, b)| a - b).collect();
        Ok((mat_vec(&self.heat_inverse, &r1), h2))
    }
}
