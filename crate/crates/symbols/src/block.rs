use tk_spectral::{Complex64, StatePair, TorusField};

use crate::grid::{quantize, SymbolGrid};
use crate::SymbolError;

/// A 2x2 matrix of symbols acting on `(Omega, J)` pairs; `None` is zero.
#[derive(Clone, Debug, Default)]
pub struct BlockSymbol {
    pub entries: [[Option<SymbolGrid>; 2]; 2],
}

impl BlockSymbol {
    pub fn diagonal(d1: SymbolGrid, d2: SymbolGrid) -> Self {
        Self {
            entries: [[Some(d1), None], [None, Some(d2)]],
        }
    }

    pub fn off_diagonal(upper: SymbolGrid, lower: SymbolGrid) -> Self {
        Self {
            entries: [[None, Some(upper)], [Some(lower), None]],
        }
    }

    fn is_zero(e: &Option<SymbolGrid>) -> bool {
        e.as_ref().is_none_or(|s| s.max_abs() == 0.0)
    }

    pub fn is_block_diagonal(&self) -> bool {
        Self::is_zero(&self.entries[0][1]) && Self::is_zero(&self.entries[1][0])
    }

    pub fn is_off_diagonal(&self) -> bool {
        Self::is_zero(&self.entries[0][0]) && Self::is_zero(&self.entries[1][1])
    }

    pub fn scale(&self, a: f64) -> Self {
        let f = |e: &Option<SymbolGrid>| e.as_ref().map(|s| s.scale(Complex64::new(a, 0.0)));
        Self {
            entries: [
                [f(&self.entries[0][0]), f(&self.entries[0][1])],
                [f(&self.entries[1][0]), f(&self.entries[1][1])],
            ],
        }
    }

    pub fn apply(&self, h: &StatePair) -> Result<StatePair, SymbolError> {
        let lat = h.lattice();
        let inputs = [&h.omega_field, &h.current_field];
        let mut out = [TorusField::zeros(lat), TorusField::zeros(lat)];
        for (i, row) in self.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if let Some(s) = e {
                    out[i] = &out[i] + &quantize(s, inputs[j])?;
                }
            }
        }
        let [omega_field, current_field] = out;
        Ok(StatePair {
            omega_field,
            current_field,
        })
    }

    /// `l^2` operator-norm bound: Frobenius combination of entrywise Schur bounds.
    pub fn op_norm_bound(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .map(|e| e.as_ref().map_or(0.0, |s| s.op_norm_bound().powi(2)))
            .sum::<f64>()
            .sqrt()
    }
}

impl SymbolGrid {
    /// Schur-test bound `sqrt(max row sum * max column sum)` for `||Op(a)||` on `l^2`.
    pub fn op_norm_bound(&self) -> f64 {
        let (n, x) = (self.n_x() as i32, self.xi_extent() as i32);
        let r = n + x;
        let side = (2 * r + 1) as usize;
        let mut rows = vec![0.0; side * side];
        let mut col_max: f64 = 0.0;
        for xi in self.xi_lattice().modes() {
            let mut col = 0.0;
            for k in self.x_lattice().modes() {
                let v = self.hat(k, xi).norm();
                col += v;
                let kp = [k[0] + xi[0] + r, k[1] + xi[1] + r];
                rows[kp[0] as usize * side + kp[1] as usize] += v;
            }
            col_max = col_max.max(col);
        }
        let row_max = rows.into_iter().fold(0.0, f64::max);
        (row_max * col_max).sqrt()
    }
}
