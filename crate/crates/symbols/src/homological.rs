use tk_spectral::{dot, norm_sq, Complex64};

use crate::cutoff::chi_lambda;
use crate::grid::SymbolGrid;
use crate::SymbolError;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn parabolic_divisor(k: [i32; 2], xi: [i32; 2], sign: f64, lam: f64, omega: [f64; 2]) -> Complex64 {
    Complex64::new(sign * norm_sq(xi), lam * dot(omega, k))
}

/// Solves `(lam w.grad + sign |xi|^2) psi + chi_lambda a = 0`:
/// `psi^(k, xi) = -chi_lambda(xi) a^(k, xi) / (i lam w.k + sign |xi|^2)`.
pub fn solve_parabolic_homological(
    a: &SymbolGrid,
    sign: f64,
    lam: f64,
    delta: f64,
    omega: [f64; 2],
) -> Result<SymbolGrid, SymbolError> {
    assert!(sign == 1.0 || sign == -1.0, "sign must be +-1");
    for k in a.x_lattice().modes() {
        for xi in a.xi_lattice().modes() {
            let num = chi_lambda(lam, delta, xi) * a.hat(k, xi);
            if num != ZERO && parabolic_divisor(k, xi, sign, lam, omega) == ZERO {
                return Err(SymbolError::Resonance { k, xi });
            }
        }
    }
    let mut psi = a.map(|k, xi, c| {
        let chi = chi_lambda(lam, delta, xi);
        if chi == 0.0 || c == ZERO {
            ZERO
        } else {
            -chi * c / parabolic_divisor(k, xi, sign, lam, omega)
        }
    });
    psi.order = a.order - 1.5;
    Ok(psi)
}

/// Relative residual `max |(i lam w.k + sign |xi|^2) psi^ + chi a^| / max |chi a^|`.
pub fn parabolic_residual(
    psi: &SymbolGrid,
    a: &SymbolGrid,
    sign: f64,
    lam: f64,
    delta: f64,
    omega: [f64; 2],
) -> f64 {
    let mut num: f64 = 0.0;
    let mut den: f64 = 0.0;
    for k in a.x_lattice().modes() {
        for xi in a.xi_lattice().modes() {
            let ca = chi_lambda(lam, delta, xi) * a.hat(k, xi);
            let r = parabolic_divisor(k, xi, sign, lam, omega) * psi.hat(k, xi) + ca;
            num = num.max(r.norm());
            den = den.max(ca.norm());
        }
    }
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

/// `<a>_x(xi) = a^(0, xi)` as an x-independent symbol.
pub fn averaged(a: &SymbolGrid) -> SymbolGrid {
    SymbolGrid::multiplier(a.xi_extent(), a.order, |xi| a.hat([0, 0], xi))
}

/// Solves `lam w.grad f + a = <a>_x` with `f^(0, .) = 0`; returns `(f, <a>_x)`.
pub fn solve_transport_homological(
    a: &SymbolGrid,
    lam: f64,
    omega: [f64; 2],
) -> Result<(SymbolGrid, SymbolGrid), SymbolError> {
    for k in a.x_lattice().modes() {
        if k != [0, 0] && dot(omega, k).abs() < 1e-14 {
            return Err(SymbolError::Resonance { k, xi: [0, 0] });
        }
    }
    let f = a.map(|k, _, c| {
        if k == [0, 0] || c == ZERO {
            ZERO
        } else {
            -c / Complex64::new(0.0, lam * dot(omega, k))
        }
    });
    Ok((f, averaged(a)))
}

/// Relative residual of `lam w.grad f + a - <a>_x`.
pub fn transport_residual(f: &SymbolGrid, a: &SymbolGrid, avg: &SymbolGrid, lam: f64, omega: [f64; 2]) -> f64 {
    let mut num: f64 = 0.0;
    for k in a.x_lattice().modes() {
        for xi in a.xi_lattice().modes() {
            let mut r = Complex64::new(0.0, lam * dot(omega, k)) * f.hat(k, xi) + a.hat(k, xi);
            if k == [0, 0] {
                r -= avg.hat(k, xi);
            }
            num = num.max(r.norm());
        }
    }
    let den = a.max_abs();
    if den == 0.0 {
        num
    } else {
        num / den
    }
}
