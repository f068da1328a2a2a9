use tk_diophantine::{linear_fit, LinearFit};
use tk_linearization::{galerkin_matrix, LinearizedOperator, ModeSpace};
use tk_spectral::{norm, Complex64, StatePair, TorusField, VectorField2};
use tk_symbols::{
    exp_map, exp_terms_needed, solve_parabolic_homological, BlockSymbol, SymbolGrid, EXP_TAIL_TOL,
};

use crate::dense::{expm, identity, join, mat_vec, norm_fro, scaled, split, zeros, CMat, Modes};
use crate::{ReductionConfig, ReductionError, Stage, StageExt};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `Phi_N^{-1} L Phi_N` on `V_N` in block form.
#[derive(Clone, Debug)]
pub struct DecoupledOperator {
    pub modes: Modes,
    pub lam: f64,
    pub delta: f64,
    pub omega: [f64; 2],
    pub a_field: VectorField2,
    /// `Pi_N L Pi_N`.
    pub original: CMat,
    pub heat_block: CMat,
    pub upper: CMat,
    pub lower: CMat,
    pub transport_block: CMat,
    pub conjugator: CMat,
    pub conjugator_inv: CMat,
    pub n_steps: usize,
    /// Frobenius norm of the off-diagonal blocks, before the first step and
    /// after each step.
    pub offdiag_norms: Vec<f64>,
}

/// The symbol `i d(x).xi` of `d.grad`.
fn transport_symbol(d: &VectorField2, xi_extent: usize) -> SymbolGrid {
    let band = d.c1.band().max(d.c2.band());
    SymbolGrid::from_fn(band, xi_extent, 1.0, |k, xi| {
        I * (d.c1.coeff(k) * xi[0] as f64 + d.c2.coeff(k) * xi[1] as f64)
    })
}

fn check_smallness(op: &LinearizedOperator, cfg: &ReductionConfig) -> Result<(), ReductionError> {
    let p = &op.params;
    let value = p.lam.powf(-p.delta) / cfg.gamma;
    if !(value <= cfg.smallness_eps) {
        return Err(ReductionError::Smallness {
            value,
            limit: cfg.smallness_eps,
        });
    }
    Ok(())
}

/// Runs `cfg.decouple_steps` conjugations. The first generator solves the
/// homological equations for `a_1 = a_2 = i d(x).xi`; later generators solve
/// them for the off-diagonal blocks of the operator conjugated so far.
pub fn decouple(op: &LinearizedOperator, cfg: &ReductionConfig) -> Result<DecoupledOperator, ReductionError> {
    check_smallness(op, cfg).at(Stage::Decouple)?;
    let (lam, delta, omega) = (op.params.lam, op.params.delta, op.omega);
    let gm = galerkin_matrix(op, cfg.n_trunc).at(Stage::Galerkin)?;
    let modes = Modes::new(gm.space.clone());
    let m = modes.len();
    let ext = modes.box_extent();

    let mut cur = gm.mat.clone();
    let mut phi = identity(2 * m);
    let mut phi_inv = identity(2 * m);
    let mut norms = Vec::with_capacity(cfg.decouple_steps + 1);
    let offdiag = |c: &CMat| {
        let b = split(c);
        norm_fro(&b[1]).hypot(norm_fro(&b[2]))
    };
    norms.push(offdiag(&cur));
    let a0 = transport_symbol(&op.d_field, ext);
    for step in 0..cfg.decouple_steps {
        let (s1, s2) = if step == 0 {
            (a0.clone(), a0.clone())
        } else {
            let b = split(&cur);
            (modes.matrix_symbol(&b[1], 0.5), modes.matrix_symbol(&b[2], 0.5))
        };
        let psi1 = solve_parabolic_homological(&s1, 1.0, lam, delta, omega).at(Stage::Decouple)?;
        let psi2 = solve_parabolic_homological(&s2, -1.0, lam, delta, omega).at(Stage::Decouple)?;
        let gen = join(&[zeros(m), modes.symbol_matrix(&psi1), modes.symbol_matrix(&psi2), zeros(m)]);
        let e = expm(&gen).at(Stage::Decouple)?;
        let e_inv = expm(&scaled(&gen, Complex64::new(-1.0, 0.0))).at(Stage::Decouple)?;
        cur = &(&e_inv * &cur) * &e;
        phi = &phi * &e;
        phi_inv = &e_inv * &phi_inv;
        norms.push(offdiag(&cur));
    }
    let [heat_block, upper, lower, transport_block] = split(&cur);
    Ok(DecoupledOperator {
        modes,
        lam,
        delta,
        omega,
        a_field: op.a_field.clone(),
        original: gm.mat,
        heat_block,
        upper,
        lower,
        transport_block,
        conjugator: phi,
        conjugator_inv: phi_inv,
        n_steps: cfg.decouple_steps,
        offdiag_norms: norms,
    })
}

impl DecoupledOperator {
    pub fn space(&self) -> &ModeSpace {
        &self.modes.space
    }

    pub fn dim(&self) -> usize {
        2 * self.modes.len()
    }

    /// The reassembled `L_1 = [[L^(1), L^(2)], [L^(3), L^(4)]]`.
    pub fn full(&self) -> CMat {
        join(&[
            self.heat_block.clone(),
            self.upper.clone(),
            self.lower.clone(),
            self.transport_block.clone(),
        ])
    }

    /// `L_1 h` computed block by block.
    pub fn apply_blocks(&self, h: &StatePair) -> StatePair {
        let h1 = self.modes.restrict(&h.omega_field);
        let h2 = self.modes.restrict(&h.current_field);
        let add = |a: Vec<Complex64>, b: Vec<Complex64>| a.iter().zip(&b).map(|(x, y)| x + y).collect::<Vec<_>>();
        let g1 = add(mat_vec(&self.heat_block, &h1), mat_vec(&self.upper, &h2));
        let g2 = add(mat_vec(&self.lower, &h1), mat_vec(&self.transport_block, &h2));
        self.pair(&g1, &g2, h.lattice())
    }

    /// `Phi^{-1} Pi_N L Pi_N Phi h`, applying `L` itself.
    pub fn apply_conjugated(&self, op: &LinearizedOperator, h: &StatePair) -> Result<StatePair, ReductionError> {
        let sp = self.space();
        let x = mat_vec(&self.conjugator, &sp.restrict(h));
        let lx = op.apply(&sp.embed(&x))?;
        let y = mat_vec(&self.conjugator_inv, &sp.restrict(&lx));
        Ok(sp.embed(&y).resample(h.lattice()))
    }

    pub fn apply_conjugator(&self, h: &StatePair) -> StatePair {
        let sp = self.space();
        sp.embed(&mat_vec(&self.conjugator, &sp.restrict(h))).resample(h.lattice())
    }

    pub fn apply_conjugator_inv(&self, h: &StatePair) -> StatePair {
        let sp = self.space();
        sp.embed(&mat_vec(&self.conjugator_inv, &sp.restrict(h))).resample(h.lattice())
    }

    /// `||Phi Phi^{-1} - I||_F`.
    pub fn conjugator_defect(&self) -> f64 {
        norm_fro(&(&(&self.conjugator * &self.conjugator_inv) - &identity(self.dim())))
    }

    fn pair(&self, g1: &[Complex64], g2: &[Complex64], lat: tk_spectral::Lattice) -> StatePair {
        StatePair {
            omega_field: self.modes.embed_into(g1, lat),
            current_field: self.modes.embed_into(g2, lat),
        }
    }
}

/// Growth of the upper off-diagonal block on single modes, before and after
/// one decoupling step.
#[derive(Clone, Debug)]
pub struct OffdiagGrowth {
    pub modes: Vec<[i32; 2]>,
    pub before: Vec<f64>,
    pub after: Vec<f64>,
    pub fit_before: LinearFit,
    pub fit_after: LinearFit,
    pub exp_terms: usize,
}

/// Matrix-free first decoupling step on the full lattice of `op`: measures
/// `||(L h)_1||` and `||(e^{-Psi} L e^{Psi} h)_1||` for `h = (0, e^{ik.x})`,
/// and fits log-log slopes in `|k|`.
pub fn offdiag_growth(op: &LinearizedOperator, ks: &[[i32; 2]]) -> Result<OffdiagGrowth, ReductionError> {
    let lat = op.lattice();
    let (lam, delta, omega) = (op.params.lam, op.params.delta, op.omega);
    let a = transport_symbol(&op.d_field, lat.n_max());
    let psi1 = solve_parabolic_homological(&a, 1.0, lam, delta, omega)?;
    let psi2 = solve_parabolic_homological(&a, -1.0, lam, delta, omega)?;
    let gen = BlockSymbol::off_diagonal(psi1, psi2);
    let terms = exp_terms_needed(gen.op_norm_bound(), EXP_TAIL_TOL, 200)?;
    let phi = exp_map(&gen, terms)?;
    let mut before = Vec::with_capacity(ks.len());
    let mut after = Vec::with_capacity(ks.len());
    for &k in ks {
        let h = StatePair {
            omega_field: TorusField::zeros(lat),
            current_field: TorusField::exp_mode(lat, k, Complex64::new(1.0, 0.0)),
        };
        before.push(op.apply(&h)?.omega_field.l2_norm());
        let w = phi.apply_inverse(&op.apply(&phi.apply(&h)?)?)?;
        after.push(w.omega_field.l2_norm());
    }
    let lx: Vec<f64> = ks.iter().map(|&k| norm(k).ln()).collect();
    let ln = |v: &[f64]| v.iter().map(|x| x.ln()).collect::<Vec<_>>();
    Ok(OffdiagGrowth {
        modes: ks.to_vec(),
        fit_before: linear_fit(&lx, &ln(&before)),
        fit_after: linear_fit(&lx, &ln(&after)),
        before,
        after,
        exp_terms: terms,
    })
}
