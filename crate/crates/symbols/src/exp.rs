use tk_spectral::{Complex64, LinearSpace, StatePair};

use crate::block::BlockSymbol;
use crate::SymbolError;

/// Tail bound required by [`exp_map`].
pub const EXP_TAIL_TOL: f64 = 1e-12;

/// Bound on `||sum_{j > n} A^j / j!||` given `||A|| <= beta`.
fn tail_bound(beta: f64, n: usize) -> f64 {
    let ratio = beta / (n as f64 + 2.0);
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    let lead = (1..=n + 1).fold(1.0, |acc, j| acc * beta / j as f64);
    lead / (1.0 - ratio)
}

/// Smallest `n <= limit` whose certified tail is at most `tol`.
pub fn exp_terms_needed(beta: f64, tol: f64, limit: usize) -> Result<usize, SymbolError> {
    (0..=limit)
        .find(|&n| tail_bound(beta, n) <= tol)
        .ok_or(SymbolError::Series {
            needed: (limit + 1..limit * 10 + 100)
                .find(|&n| tail_bound(beta, n) <= tol)
                .unwrap_or(usize::MAX),
            limit,
        })
}

/// `sum_{j <= terms} A^j u / j!` for any linear map `A`.
pub fn exp_apply<V: LinearSpace, E>(
    mut op: impl FnMut(&V) -> Result<V, E>,
    u: &V,
    terms: usize,
) -> Result<V, E> {
    let mut acc = u.clone();
    let mut term = u.clone();
    for j in 1..=terms {
        term = op(&term)?.scaled(1.0 / j as f64);
        acc.axpy(Complex64::new(1.0, 0.0), &term);
    }
    Ok(acc)
}

/// `exp(Psi)` truncated after `terms` terms.
#[derive(Clone, Debug)]
pub struct ExpOperator {
    pub psi: BlockSymbol,
    pub terms: usize,
    /// Certified relative `l^2` bound on the omitted tail.
    pub tail_bound: f64,
}

/// Builds `exp(Psi)` with `n_terms` terms; fails unless the certified tail is
/// below `EXP_TAIL_TOL`.
pub fn exp_map(psi: &BlockSymbol, n_terms: usize) -> Result<ExpOperator, SymbolError> {
    let beta = psi.op_norm_bound();
    let tail = tail_bound(beta, n_terms);
    if tail > EXP_TAIL_TOL {
        return Err(SymbolError::Series {
            needed: exp_terms_needed(beta, EXP_TAIL_TOL, 10 * n_terms + 100)
                .unwrap_or(usize::MAX),
            limit: n_terms,
        });
    }
    Ok(ExpOperator {
        psi: psi.clone(),
        terms: n_terms,
        tail_bound: tail,
    })
}

impl ExpOperator {
    pub fn apply(&self, h: &StatePair) -> Result<StatePair, SymbolError> {
        exp_apply(|v: &StatePair| self.psi.apply(v), h, self.terms)
    }

    /// `exp(-Psi) h`.
    pub fn apply_inverse(&self, h: &StatePair) -> Result<StatePair, SymbolError> {
        exp_apply(|v: &StatePair| self.psi.apply(v).map(|w| w.scale(-1.0)), h, self.terms)
    }
}
