use serde::{Deserialize, Serialize};
use tk_linearization::LinearizedOperator;
use tk_spectral::{Complex64, StatePair, DEFAULT_S0};

use crate::decouple::{decouple, DecoupledOperator};
use crate::dense::{mat_vec, norm_fro};
use crate::heat::{schur_to_transport, SchurReduction};
use crate::lower::{check_melnikov, reduce_lower_orders, TransportReduction};
use crate::straighten::{straighten_transport, Straightening};
use crate::{ReductionConfig, ReductionError, Stage, StageExt};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZEntry {
    pub k: [i32; 2],
    pub re: f64,
    pub im: f64,
}

/// Per-stage diagnostics of one reduction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageReport {
    pub n_trunc: f64,
    pub dim: usize,
    pub lam: f64,
    pub omega: [f64; 2],
    pub gamma: f64,
    pub decouple_steps: usize,
    pub decouple_offdiag_norms: Vec<f64>,
    pub conjugator_defect: f64,
    pub heat_contraction: f64,
    pub heat_terms: usize,
    pub alpha_iterations: usize,
    pub alpha_increment: f64,
    pub fold: f64,
    pub diffeo_inverse_defect: f64,
    pub conjugation_residual: f64,
    pub truncation_defect: f64,
    pub principal_slope_before: Option<f64>,
    pub principal_slope_after: Option<f64>,
    pub lower_steps: usize,
    pub lower_offdiag_norms: Vec<f64>,
    pub r1_norm: f64,
    pub transport_neumann_factor: f64,
    pub transport_reassembly_defect: f64,
    pub melnikov_min_divisor: f64,
    pub z_max: f64,
    pub z_table: Vec<ZEntry>,
    /// `||Pi_N L h - rhs||_{s0} / ||rhs||_{s0}` of the last solve, if any.
    pub end_to_end_residual: Option<f64>,
}

/// The assembled inverse of `Pi_N L Pi_N` through the reduction chain.
#[derive(Clone, Debug)]
pub struct PaperPath {
    pub decoupled: DecoupledOperator,
    pub schur: SchurReduction,
    pub transport: TransportReduction,
    pub report: StageReport,
    pub cfg: ReductionConfig,
}

impl PaperPath {
    pub fn build(op: &LinearizedOperator, cfg: &ReductionConfig) -> Result<Self, ReductionError> {
        let d = decouple(op, cfg)?;
        let schur = schur_to_transport(&d, cfg).at(Stage::Schur)?;
        let modes = d.modes.clone();
        let st = if op.a_field.c1.max_abs_coeff() == 0.0 && op.a_field.c2.max_abs_coeff() == 0.0 {
            Straightening::identity(&schur.transport, &modes, op.lattice())
        } else {
            straighten_transport(&schur.transport, &modes, &op.a_field, d.lam, d.omega, cfg)?
        };
        let lower = reduce_lower_orders(&st.conjugated, &modes, d.lam, d.omega, cfg.lower_steps)
            .at(Stage::LowerOrders)?;
        let t = TransportReduction::new(modes, d.lam, d.omega, st, lower);
        let melnikov = check_melnikov(&t, cfg.gamma, cfg).at(Stage::Transport)?;
        let factor = t.neumann_factor().at(Stage::Transport)?;
        let st = &t.straightening;
        let report = StageReport {
            n_trunc: cfg.n_trunc,
            dim: d.dim(),
            lam: d.lam,
            omega: d.omega,
            gamma: cfg.gamma,
            decouple_steps: d.n_steps,
            decouple_offdiag_norms: d.offdiag_norms.clone(),
            conjugator_defect: d.conjugator_defect(),
            heat_contraction: schur.heat.contraction,
            heat_terms: schur.heat_terms,
            alpha_iterations: st.iterations,
            alpha_increment: st.increment,
            fold: st.fold,
            diffeo_inverse_defect: st.inverse_defect,
            conjugation_residual: st.conjugation_residual,
            truncation_defect: st.truncation_defect,
            principal_slope_before: st.principal_slope_before,
            principal_slope_after: st.principal_slope_after,
            lower_steps: t.lower.steps,
            lower_offdiag_norms: t.lower.offdiag_norms.clone(),
            r1_norm: norm_fro(&t.residual_op),
            transport_neumann_factor: factor,
            transport_reassembly_defect: t.reassembly_defect(&schur.transport),
            melnikov_min_divisor: melnikov,
            z_max: t.z_max(),
            z_table: t
                .z_table
                .iter()
                .map(|(&k, z)| ZEntry { k, re: z.re, im: z.im })
                .collect(),
            end_to_end_residual: None,
        };
        Ok(Self {
            decoupled: d,
            schur,
            transport: t,
            report,
            cfg: cfg.clone(),
        })
    }

    /// `h` with `Pi_N L Pi_N h = Pi_N rhs`, on the lattice of `rhs`.
    pub fn solve(&self, rhs: &StatePair) -> Result<StatePair, ReductionError> {
        let d = &self.decoupled;
        let sp = d.space();
        let m = d.modes.len();
        let g = mat_vec(&d.conjugator_inv, &sp.restrict(&rhs.resample(sp.lattice)));
        let (h1, h2) = self
            .schur
            .solve_system(d, &g[..m], &g[m..], |r| {
                self.transport.solve_vec(r, &self.cfg).map(|(h, _)| h)
            })
            .at(Stage::Assemble)?;
        let h: Vec<Complex64> = h1.into_iter().chain(h2).collect();
        Ok(sp.embed(&mat_vec(&d.conjugator, &h)).resample(rhs.lattice()))
    }

    /// `||Pi_N L h - Pi_N rhs||_{s0} / ||Pi_N rhs||_{s0}` with `L` applied
    /// directly.
    pub fn residual(&self, op: &LinearizedOperator, h: &StatePair, rhs: &StatePair) -> Result<f64, ReductionError> {
        let sp = self.decoupled.space();
        let lh = op.apply(&h.resample(sp.lattice))?;
        let r = sp.embed(&sp.restrict(&lh));
        let b = sp.embed(&sp.restrict(&rhs.resample(sp.lattice)));
        Ok(r.sub(&b).sobolev_norm(DEFAULT_S0) / b.sobolev_norm(DEFAULT_S0))
    }
}

/// Builds the chain for `op`, solves `L h = rhs` on `V_N` and reports.
pub fn invert_linearized_paper_path(
    op: &LinearizedOperator,
    rhs: &StatePair,
    cfg: &ReductionConfig,
) -> Result<(StatePair, StageReport), ReductionError> {
    let path = PaperPath::build(op, cfg)?;
    let h = path.solve(rhs)?;
    let mut report = path.report.clone();
    report.end_to_end_residual = Some(path.residual(op, &h, rhs)?);
    Ok((h, report))
}
