use num_complex::Complex64;
use tk_spectral::{bracket, dot, norm, norm_sq, Lattice, TorusField, MEAN_TOL};

use crate::DioError;

/// Divisors below this fraction of `lam |omega| |k|` count as resonant.
const RESONANCE_TOL: f64 = 1e-14;

fn require_zero_mean(u: &TorusField) -> Result<(), DioError> {
    let m = u.mean().norm();
    if m > MEAN_TOL * u.l2_norm().max(1.0) {
        return Err(tk_spectral::SpectralError::NonzeroMean(m).into());
    }
    Ok(())
}

/// `lam omega . grad u`.
pub fn apply_directional(omega: [f64; 2], lam: f64, u: &TorusField) -> TorusField {
    TorusField::from_fn(u.lattice(), |k| {
        Complex64::new(0.0, lam * dot(omega, k)) * u.coeff(k)
    })
}

/// Zero-average solution of `lam omega . grad v = u`.
pub fn invert_directional(omega: [f64; 2], lam: f64, u: &TorusField) -> Result<TorusField, DioError> {
    require_zero_mean(u)?;
    let scale = lam * omega[0].hypot(omega[1]);
    let lat = u.lattice();
    let mut out = TorusField::zeros(lat);
    for (i, &c) in u.coeffs().iter().enumerate() {
        let k = lat.mode(i);
        if k == [0, 0] {
            continue;
        }
        let w = lam * dot(omega, k);
        if w.abs() <= RESONANCE_TOL * scale * norm(k) {
            if c != Complex64::new(0.0, 0.0) {
                return Err(DioError::Resonance(k));
            }
            continue;
        }
        out.set_coeff(k, c / Complex64::new(0.0, w));
    }
    Ok(out)
}

/// `Lambda(k) = i lam omega.k + |k|^2`, the symbol of `lam omega . grad - Delta`.
pub fn heat_eigenvalue(k: [i32; 2], omega: [f64; 2], lam: f64) -> Complex64 {
    Complex64::new(norm_sq(k), lam * dot(omega, k))
}

pub fn apply_l_lambda(omega: [f64; 2], lam: f64, u: &TorusField) -> TorusField {
    TorusField::from_fn(u.lattice(), |k| heat_eigenvalue(k, omega, lam) * u.coeff(k))
}

/// `(lam omega . grad - Delta)^{-1}` on zero-average fields.
pub fn invert_l_lambda(omega: [f64; 2], lam: f64, u: &TorusField) -> Result<TorusField, DioError> {
    require_zero_mean(u)?;
    let lat = u.lattice();
    let mut out = TorusField::zeros(lat);
    for (i, &c) in u.coeffs().iter().enumerate() {
        let k = lat.mode(i);
        if k == [0, 0] {
            continue;
        }
        let ev = heat_eigenvalue(k, omega, lam);
        // |Lambda(k)| >= |k|^2 >= 1 away from the origin
        assert!(ev.norm() >= norm_sq(k), "heat eigenvalue below |k|^2 at {k:?}");
        out.set_coeff(k, c / ev);
    }
    Ok(out)
}

/// `sup_{0 < |k| <= r} <k> / |Lambda(k)|`.
pub fn gain_sup(omega: [f64; 2], lam: f64, r: usize) -> f64 {
    disk_sup(r, |k| bracket(k) / heat_eigenvalue(k, omega, lam).norm())
}

/// `sup_{0 < |k| <= r} |k|^{-tau} / |Lambda(k)|`.
pub fn loss_sup(omega: [f64; 2], lam: f64, tau: f64, r: usize) -> f64 {
    disk_sup(r, |k| norm(k).powf(-tau) / heat_eigenvalue(k, omega, lam).norm())
}

fn disk_sup(r: usize, f: impl Fn([i32; 2]) -> f64) -> f64 {
    let lat = Lattice::new(r);
    let r2 = (r * r) as f64;
    lat.modes()
        .filter(|&k| k != [0, 0] && norm_sq(k) <= r2)
        .map(f)
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_mode_quotients() {
        let lat = Lattice::new(4);
        let w = [1.0, 1.5];
        let u = TorusField::exp_mode(lat, [2, -1], Complex64::new(0.3, -0.2));
        let v = invert_directional(w, 10.0, &u).unwrap();
        let want = Complex64::new(0.3, -0.2) / Complex64::new(0.0, 10.0 * 0.5);
        assert!((v.coeff([2, -1]) - want).norm() < 1e-16);
        let c = TorusField::cos_mode(lat, [1, 0], 1.0);
        let h = invert_l_lambda(w, 7.0, &c).unwrap();
        let e = Complex64::new(0.5, 0.0) / Complex64::new(1.0, 7.0);
        assert!((h.coeff([1, 0]) - e).norm() < 1e-16);
        assert!((h.coeff([-1, 0]) - e.conj()).norm() < 1e-16);
    }

    #[test]
    fn resonance_and_mean_are_errors() {
        let lat = Lattice::new(3);
        let u = TorusField::cos_mode(lat, [1, -1], 1.0);
        assert!(matches!(invert_directional([1.0, 1.0], 5.0, &u), Err(DioError::Resonance(_))));
        let c = TorusField::constant(lat, 1.0);
        assert!(invert_directional([1.0, 1.4], 5.0, &c).is_err());
        assert!(invert_l_lambda([1.0, 1.4], 5.0, &c).is_err());
    }
}
