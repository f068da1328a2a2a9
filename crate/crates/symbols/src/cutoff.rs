use tk_spectral::{norm, Complex64};

use crate::grid::SymbolGrid;

/// Compactly supported bump `exp(1 - 1/(1 - t^2))` on `(-1, 1)`.
fn bump(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    }
}

/// Smooth radial step: 0 for `r <= 1/2`, 1 for `r >= 1`.
pub fn chi(r: f64) -> f64 {
    if r <= 0.5 {
        return 0.0;
    }
    if r >= 1.0 {
        return 1.0;
    }
    let t = 2.0 * r - 1.0;
    let up = bump(1.0 - t);
    up / (up + bump(t))
}

/// `lam^{6 delta}`, the radius beyond which `chi_lambda = 1`.
pub fn cutoff_radius(lam: f64, delta: f64) -> f64 {
    lam.powf(6.0 * delta)
}

pub fn chi_lambda(lam: f64, delta: f64, xi: [i32; 2]) -> f64 {
    chi(norm(xi) / cutoff_radius(lam, delta))
}

/// `chi_lambda` as an order-zero Fourier multiplier.
pub fn cutoff_chi_lambda(lam: f64, delta: f64, xi_extent: usize) -> SymbolGrid {
    SymbolGrid::multiplier(xi_extent, 0.0, |xi| Complex64::new(chi_lambda(lam, delta, xi), 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile() {
        assert_eq!(chi(0.3), 0.0);
        assert_eq!(chi(0.5), 0.0);
        assert_eq!(chi(1.0), 1.0);
        assert!((chi(0.75) - 0.5).abs() < 1e-15);
        let mut prev = 0.0;
        for i in 0..=100 {
            let v = chi(0.5 + i as f64 / 200.0);
            assert!(v >= prev);
            prev = v;
        }
    }
}
