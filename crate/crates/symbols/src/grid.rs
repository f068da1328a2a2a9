use rayon::prelude::*;
use tk_spectral::{bracket, Complex64, Lattice, TorusField};

use crate::SymbolError;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct SymbolGrid {
    x_lattice: Lattice,
    xi_lattice: Lattice,
    /// Nominal order `m`, used as the default weight in norms.
    pub order: f64,
    /// Row-major: x-mode index, then xi index.
    coeffs: Vec<Complex64>,
}

impl SymbolGrid {
    pub fn zeros(n_x: usize, xi_extent: usize, order: f64) -> Self {
        let x_lattice = Lattice::new(n_x);
        let xi_lattice = Lattice::new(xi_extent);
        Self {
            x_lattice,
            xi_lattice,
            order,
            coeffs: vec![ZERO; x_lattice.len() * xi_lattice.len()],
        }
    }

    /// Builds `a^(k, xi) = f(k, xi)`.
    pub fn from_fn(
        n_x: usize,
        xi_extent: usize,
        order: f64,
        f: impl Fn([i32; 2], [i32; 2]) -> Complex64 + Sync,
    ) -> Self {
        let mut out = Self::zeros(n_x, xi_extent, order);
        let (xl, xil) = (out.x_lattice, out.xi_lattice);
        let w = xil.len();
        out.coeffs.par_chunks_mut(w).enumerate().for_each(|(i, row)| {
            let k = xl.mode(i);
            for (j, c) in row.iter_mut().enumerate() {
                *c = f(k, xil.mode(j));
            }
        });
        out
    }

    /// The Fourier multiplier `g(xi)`.
    pub fn multiplier(xi_extent: usize, order: f64, g: impl Fn([i32; 2]) -> Complex64 + Sync) -> Self {
        Self::from_fn(0, xi_extent, order, |_, xi| g(xi))
    }

    /// Multiplication by the field `c(x)`.
    pub fn multiplication(c: &TorusField, xi_extent: usize) -> Self {
        Self::from_fn(c.band(), xi_extent, 0.0, |k, _| c.coeff(k))
    }

    pub fn n_x(&self) -> usize {
        self.x_lattice.n_max()
    }

    pub fn xi_extent(&self) -> usize {
        self.xi_lattice.n_max()
    }

    pub fn x_lattice(&self) -> Lattice {
        self.x_lattice
    }

    pub fn xi_lattice(&self) -> Lattice {
        self.xi_lattice
    }

    /// `a^(k, xi)`, zero outside the stored ranges.
    pub fn hat(&self, k: [i32; 2], xi: [i32; 2]) -> Complex64 {
        match (self.x_lattice.index(k), self.xi_lattice.index(xi)) {
            (Some(i), Some(j)) => self.coeffs[i * self.xi_lattice.len() + j],
            _ => ZERO,
        }
    }

    pub fn set_hat(&mut self, k: [i32; 2], xi: [i32; 2], c: Complex64) {
        let i = self.x_lattice.index(k).expect("x-mode outside symbol band");
        let j = self.xi_lattice.index(xi).expect("xi outside symbol extent");
        self.coeffs[i * self.xi_lattice.len() + j] = c;
    }

    /// `x -> a(x, xi)` as a field on the x-band lattice.
    pub fn column(&self, xi: [i32; 2]) -> TorusField {
        TorusField::from_fn(self.x_lattice, |k| self.hat(k, xi))
    }

    /// Samples `a(x_j, xi)` on an `m x m` collocation grid.
    pub fn values_at(&self, xi: [i32; 2], m: usize) -> Vec<Complex64> {
        self.column(xi).to_grid(m)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `max |a(x, -xi) - conj a(x, xi)|` in coefficient form:
    /// `a^(k, -xi) = conj a^(-k, xi)`.
    pub fn reality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for k in self.x_lattice.modes() {
            for xi in self.xi_lattice.modes() {
                let d = self.hat(k, [-xi[0], -xi[1]]) - self.hat([-k[0], -k[1]], xi).conj();
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    /// Elementwise map `a^(k, xi) -> f(k, xi, a^(k, xi))`.
    pub fn map(&self, f: impl Fn([i32; 2], [i32; 2], Complex64) -> Complex64 + Sync) -> Self {
        let mut out = self.clone();
        let (xl, xil) = (self.x_lattice, self.xi_lattice);
        let w = xil.len();
        out.coeffs.par_chunks_mut(w).enumerate().for_each(|(i, row)| {
            let k = xl.mode(i);
            for (j, c) in row.iter_mut().enumerate() {
                *c = f(k, xil.mode(j), *c);
            }
        });
        out
    }

    pub fn scale(&self, a: Complex64) -> Self {
        self.map(|_, _, c| a * c)
    }

    /// Sum on the union of x-bands and the common xi extent.
    pub fn add(&self, other: &Self) -> Self {
        let n_x = self.n_x().max(other.n_x());
        let ext = self.xi_extent().min(other.xi_extent());
        Self::from_fn(n_x, ext, self.order.max(other.order), |k, xi| self.hat(k, xi) + other.hat(k, xi))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Repeated centered difference `Delta^beta`, losing `max(beta)` of extent.
    pub fn difference(&self, beta: [u32; 2]) -> Self {
        let mut cur = self.clone();
        for (axis, &times) in beta.iter().enumerate() {
            for _ in 0..times {
                let ext = cur.xi_extent().saturating_sub(1);
                let prev = cur;
                cur = Self::from_fn(prev.n_x(), ext, prev.order, |k, xi| {
                    let mut p = xi;
                    let mut q = xi;
                    p[axis] += 1;
                    q[axis] -= 1;
                    (prev.hat(k, p) - prev.hat(k, q)) * 0.5
                });
            }
        }
        cur
    }

    /// `sup_xi ||a(., xi)||_s <xi>^{-m}` over the stored extent.
    fn seminorm0(&self, m: f64, s: f64) -> f64 {
        self.xi_lattice
            .modes()
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&xi| self.column(xi).sobolev_norm(s) * bracket(xi).powf(-m))
            .reduce(|| 0.0, f64::max)
    }
}

/// `|Op(a)|_{m,s,alpha} = max_{|beta| <= alpha} sup_xi ||Delta^beta a(., xi)||_s <xi>^{-m+|beta|}`.
pub fn weighted_norm(a: &SymbolGrid, m: f64, s: f64, alpha: u32) -> f64 {
    let mut best: f64 = 0.0;
    for b1 in 0..=alpha {
        for b2 in 0..=(alpha - b1) {
            let d = a.difference([b1, b2]);
            best = best.max(d.seminorm0(m - (b1 + b2) as f64, s));
        }
    }
    best
}

/// `Op(a) u`, truncated to the lattice of `u`.
pub fn quantize(a: &SymbolGrid, u: &TorusField) -> Result<TorusField, SymbolError> {
    quantize_into(a, u, u.lattice())
}

/// `Op(a) u`, truncated to `out`.
pub fn quantize_into(a: &SymbolGrid, u: &TorusField, out: Lattice) -> Result<TorusField, SymbolError> {
    let band = u.band();
    if band > a.xi_extent() {
        return Err(SymbolError::XiExtent {
            need: band,
            have: a.xi_extent(),
        });
    }
    let ul = u.lattice();
    let mut w = TorusField::zeros(out);
    let src: Vec<([i32; 2], Complex64)> = u
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != ZERO)
        .map(|(i, c)| (ul.mode(i), *c))
        .collect();
    for (xi, c) in src {
        for k in a.x_lattice.modes() {
            let h = a.hat(k, xi);
            if h != ZERO {
                w.add_coeff([xi[0] + k[0], xi[1] + k[1]], h * c);
            }
        }
    }
    Ok(w)
}
