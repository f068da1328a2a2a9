//! Normal form of the straightened transport operator: conjugations by
//! `exp(M_n)` that push the x-dependence of the zero-order part into the
//! remainder and collect its average into `z(k)`.

use tk_diophantine::{melnikov_check, DioParams, ZTable};
use tk_spectral::{dot, Complex64, TorusField, VectorField2};
use tk_symbols::solve_transport_homological;

use crate::dense::{
    diag_mat, expm, identity, mat_vec, neumann_solve, norm_fro, row_scaled, scaled, spectral_norm, CMat,
    Modes,
};
use crate::straighten::Straightening;
use crate::{ReductionConfig, ReductionError, Stage, StageExt};

#[derive(Clone, Debug)]
pub struct LowerOrders {
    pub v: CMat,
    pub v_inv: CMat,
    /// `z(k)` on the modes.
    pub z: Vec<Complex64>,
    /// `i lam w.k + z(k)`.
    pub diag: Vec<Complex64>,
    /// `R_1 = V^{-1} P_0 V - diag`.
    pub residual: CMat,
    pub steps: usize,
    /// Frobenius norm of the off-diagonal part before each step and at the end.
    pub offdiag_norms: Vec<f64>,
}

fn offdiag_norm(q: &CMat) -> f64 {
    let mut s = 0.0;
    for j in 0..q.ncols() {
        for i in 0..q.nrows() {
            if i != j {
                s += q[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// `n_steps` normal-form steps on `p0`, the matrix of `P_0` on the modes.
pub fn reduce_lower_orders(
    p0: &CMat,
    modes: &Modes,
    lam: f64,
    omega: [f64; 2],
    n_steps: usize,
) -> Result<LowerOrders, ReductionError> {
    let n = modes.len();
    let d0 = modes.diag(|k| Complex64::new(0.0, lam * dot(omega, k)));
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    let mut p = p0.clone();
    let mut v = identity(n);
    let mut v_inv = identity(n);
    let mut norms = Vec::with_capacity(n_steps + 1);
    let current_diag = |z: &[Complex64]| -> Vec<Complex64> { d0.iter().zip(z).map(|(a, b)| a + b).collect() };
    for _ in 0..n_steps {
        let q = &p - &diag_mat(&current_diag(&z));
        norms.push(offdiag_norm(&q));
        let sym = modes.matrix_symbol(&q, 0.0);
        let (f, avg) = solve_transport_homological(&sym, lam, omega)?;
        for (i, zi) in z.iter_mut().enumerate() {
            *zi += avg.hat([0, 0], modes.mode(i));
        }
        let m = modes.symbol_matrix(&f);
        let e = expm(&m)?;
        let e_inv = expm(&scaled(&m, Complex64::new(-1.0, 0.0)))?;
        p = &(&e_inv * &p) * &e;
        v = &v * &e;
        v_inv = &e_inv * &v_inv;
    }
    let diag = current_diag(&z);
    let residual = &p - &diag_mat(&diag);
    norms.push(offdiag_norm(&residual));
    Ok(LowerOrders {
        v,
        v_inv,
        z,
        diag,
        residual,
        steps: n_steps,
        offdiag_norms: norms,
    })
}

/// Everything needed to invert `P`: straightening, normal form, `z(k)` and `R_1`.
#[derive(Clone, Debug)]
pub struct TransportReduction {
    pub modes: Modes,
    pub lam: f64,
    pub omega: [f64; 2],
    pub alpha: VectorField2,
    pub alpha_inv: VectorField2,
    pub z_table: ZTable,
    /// `R_1` on the modes.
    pub residual_op: CMat,
    pub straightening: Straightening,
    pub lower: LowerOrders,
}

impl TransportReduction {
    pub fn new(modes: Modes, lam: f64, omega: [f64; 2], straightening: Straightening, lower: LowerOrders) -> Self {
        let z_table = (0..modes.len()).map(|i| (modes.mode(i), lower.z[i])).collect();
        Self {
            lam,
            omega,
            alpha: straightening.alpha.clone(),
            alpha_inv: straightening.alpha_inv.clone(),
            z_table,
            residual_op: lower.residual.clone(),
            modes,
            straightening,
            lower,
        }
    }

    /// `D^{-1} R_1`.
    fn scaled_residual(&self) -> CMat {
        let inv: Vec<Complex64> = self.lower.diag.iter().map(|c| 1.0 / c).collect();
        row_scaled(&inv, &self.residual_op)
    }

    /// `||D^{-1} R_1||_2`, the Neumann factor of `P_1`.
    pub fn neumann_factor(&self) -> Result<f64, ReductionError> {
        spectral_norm(&self.scaled_residual())
    }

    pub fn z_max(&self) -> f64 {
        self.lower.z.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest `|z(-k) - conj z(k)|`.
    pub fn z_reality_defect(&self) -> f64 {
        self.z_table
            .iter()
            .map(|(k, z)| {
                self.z_table
                    .get(&[-k[0], -k[1]])
                    .map_or(z.norm(), |w| (w - z.conj()).norm())
            })
            .fold(0.0, f64::max)
    }

    /// `h = A V (D + R_1)^{-1} V^{-1} A^{-1} rhs`; returns the number of
    /// Neumann terms as well.
    pub fn solve_vec(&self, rhs: &[Complex64], cfg: &ReductionConfig) -> Result<(Vec<Complex64>, usize), ReductionError> {
        let st = &self.straightening;
        let y = mat_vec(&self.lower.v_inv, &mat_vec(&st.a_inv_mat, rhs));
        let b: Vec<Complex64> = y.iter().zip(&self.lower.diag).map(|(a, d)| a / d).collect();
        let e = self.scaled_residual();
        let factor = spectral_norm(&e)?;
        if factor >= 1.0 {
            return Err(ReductionError::Contraction(factor));
        }
        let (w, terms) = neumann_solve(|x| mat_vec(&e, x), &b, cfg.neumann_tol, cfg.max_neumann_terms)?;
        Ok((mat_vec(&st.a_mat, &mat_vec(&self.lower.v, &w)), terms))
    }

    /// Reassembled `A V (D + R_1) V^{-1} A^{-1}`, which equals `P`.
    pub fn reassembled(&self) -> CMat {
        let st = &self.straightening;
        let p1 = &diag_mat(&self.lower.diag) + &self.residual_op;
        &(&(&(&st.a_mat * &self.lower.v) * &p1) * &self.lower.v_inv) * &st.a_inv_mat
    }

    pub fn reassembly_defect(&self, p: &CMat) -> f64 {
        norm_fro(&(&self.reassembled() - p)) / norm_fro(p)
    }
}

/// Melnikov membership of `omega` with the computed `z(k)`.
pub fn check_melnikov(t: &TransportReduction, gamma: f64, cfg: &ReductionConfig) -> Result<f64, ReductionError> {
    let p = DioParams::new(gamma, cfg.tau, cfg.k_check).map_err(|e| ReductionError::Param(e.to_string()))?;
    let c = melnikov_check(t.omega, t.lam, &p, &t.z_table);
    if !c.ok {
        return Err(ReductionError::Melnikov {
            k: c.argmin,
            value: c.min_divisor,
        });
    }
    Ok(c.min_divisor)
}

/// Solves `P h = rhs` on `V_N` after checking the Melnikov condition.
pub fn invert_transport(
    t: &TransportReduction,
    rhs: &TorusField,
    gamma: f64,
    cfg: &ReductionConfig,
) -> Result<TorusField, ReductionError> {
    check_melnikov(t, gamma, cfg).at(Stage::Transport)?;
    let (h, _) = t.solve_vec(&t.modes.restrict(rhs), cfg).at(Stage::Transport)?;
    Ok(t.modes.embed_into(&h, rhs.lattice()))
}
