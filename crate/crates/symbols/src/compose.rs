use rayon::prelude::*;
use tk_spectral::Complex64;

use crate::grid::{weighted_norm, SymbolGrid};
use crate::SymbolError;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Collects per-xi columns into a grid with band `n_x`.
fn from_columns(n_x: usize, ext: usize, order: f64, cols: Vec<Vec<([i32; 2], Complex64)>>) -> SymbolGrid {
    let mut out = SymbolGrid::zeros(n_x, ext, order);
    let xil = out.xi_lattice();
    for (j, col) in cols.into_iter().enumerate() {
        let xi = xil.mode(j);
        for (k, c) in col {
            let cur = out.hat(k, xi);
            out.set_hat(k, xi, cur + c);
        }
    }
    out
}

fn nonzero_column(a: &SymbolGrid, xi: [i32; 2]) -> Vec<([i32; 2], Complex64)> {
    a.x_lattice()
        .modes()
        .map(|k| (k, a.hat(k, xi)))
        .filter(|(_, c)| *c != ZERO)
        .collect()
}

/// Exact symbol of `Op(a) Op(b)`:
/// `sigma^(k, xi) = sum_{k2} a^(k - k2, xi + k2) b^(k2, xi)`.
pub fn compose_exact(a: &SymbolGrid, b: &SymbolGrid) -> Result<SymbolGrid, SymbolError> {
    let nb = b.n_x();
    if a.xi_extent() < nb {
        return Err(SymbolError::XiExtent {
            need: nb,
            have: a.xi_extent(),
        });
    }
    let ext = b.xi_extent().min(a.xi_extent() - nb);
    let n_x = a.n_x() + nb;
    let xil = SymbolGrid::zeros(0, ext, 0.0).xi_lattice();
    let cols: Vec<_> = (0..xil.len())
        .into_par_iter()
        .map(|j| {
            let xi = xil.mode(j);
            let mut col = Vec::new();
            for (k2, bc) in nonzero_column(b, xi) {
                let shifted = [xi[0] + k2[0], xi[1] + k2[1]];
                for (k1, ac) in nonzero_column(a, shifted) {
                    col.push(([k1[0] + k2[0], k1[1] + k2[1]], ac * bc));
                }
            }
            col
        })
        .collect();
    Ok(from_columns(n_x, ext, a.order + b.order, cols))
}

/// Pointwise product `a(x, xi) b(x, xi)`.
pub fn multiply(a: &SymbolGrid, b: &SymbolGrid) -> SymbolGrid {
    let ext = a.xi_extent().min(b.xi_extent());
    let xil = SymbolGrid::zeros(0, ext, 0.0).xi_lattice();
    let cols: Vec<_> = (0..xil.len())
        .into_par_iter()
        .map(|j| {
            let xi = xil.mode(j);
            let cb = nonzero_column(b, xi);
            let mut col = Vec::new();
            for (k1, ac) in nonzero_column(a, xi) {
                for &(k2, bc) in &cb {
                    col.push(([k1[0] + k2[0], k1[1] + k2[1]], ac * bc));
                }
            }
            col
        })
        .collect();
    from_columns(a.n_x() + b.n_x(), ext, a.order + b.order, cols)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Truncated expansion `sum_{|beta| < n_terms} (1/beta!) Delta_xi^beta a . D_x^beta b`
/// with `D_x = -i d_x`, and the `(m_a + m_b - n_terms, s, 0)` norm of
/// `compose_exact(a, b)` minus the expansion.
pub fn compose_expand(
    a: &SymbolGrid,
    b: &SymbolGrid,
    n_terms: u32,
    s: f64,
) -> Result<(SymbolGrid, f64), SymbolError> {
    assert!(n_terms >= 1, "at least one term");
    let exact = compose_exact(a, b)?;
    let mut sum: Option<SymbolGrid> = None;
    for order in 0..n_terms {
        for b1 in 0..=order {
            let beta = [b1, order - b1];
            let da = a.difference(beta);
            let db = b.map(|k, _, c| {
                c * (k[0] as f64).powi(beta[0] as i32) * (k[1] as f64).powi(beta[1] as i32)
            });
            let w = 1.0 / (factorial(beta[0]) * factorial(beta[1]));
            let term = multiply(&da, &db).scale(Complex64::new(w, 0.0));
            sum = Some(match sum {
                None => term,
                Some(acc) => acc.add(&term),
            });
        }
    }
    let mut principal = sum.expect("n_terms >= 1");
    principal.order = a.order + b.order;
    let rem = exact.sub(&principal);
    let m = a.order + b.order - n_terms as f64;
    Ok((principal, weighted_norm(&rem, m, s, 0)))
}
