//! Fourier-multiplier calculus: derivatives, Laplacian and its inverse,
//! curl, divergence and the Biot-Savart operator `grad^perp (-Delta)^{-1}`.

use num_complex::Complex64;

use crate::field::TorusField;
use crate::lattice::norm_sq;
use crate::vector::VectorField2;
use crate::SpectralError;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative size of `u_0` tolerated by operations that require zero mean.
pub const MEAN_TOL: f64 = 1e-12;

pub fn partial(u: &TorusField, axis: usize) -> TorusField {
    u.map_modes(|k, c| I * k[axis] as f64 * c)
}

pub fn grad(u: &TorusField) -> VectorField2 {
    VectorField2 {
        c1: partial(u, 0),
        c2: partial(u, 1),
    }
}

/// `grad^perp u = (d_2 u, -d_1 u)`.
pub fn perp_grad(u: &TorusField) -> VectorField2 {
    VectorField2 {
        c1: partial(u, 1),
        c2: partial(u, 0).scale(-1.0),
    }
}

pub fn laplacian(u: &TorusField) -> TorusField {
    u.map_modes(|k, c| -norm_sq(k) * c)
}

/// `Delta^{-1}` on zero-average fields.
pub fn inv_laplacian(u: &TorusField) -> Result<TorusField, SpectralError> {
    u.require_zero_mean(MEAN_TOL)?;
    Ok(u.map_modes(|k, c| {
        let k2 = norm_sq(k);
        if k2 == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            -c / k2
        }
    }))
}

/// `curl V = d_1 V_2 - d_2 V_1`.
pub fn curl(v: &VectorField2) -> TorusField {
    let lat = v.c1.lattice();
    let len = lat.len();
    let coeffs = (0..len)
        .map(|i| {
            let k = lat.mode(i);
            I * (k[0] as f64 * v.c2.coeffs()[i] - k[1] as f64 * v.c1.coeffs()[i])
        })
        .collect();
    TorusField::wrap(lat, coeffs)
}

pub fn div(v: &VectorField2) -> TorusField {
    let lat = v.c1.lattice();
    let len = lat.len();
    let coeffs = (0..len)
        .map(|i| {
            let k = lat.mode(i);
            I * (k[0] as f64 * v.c1.coeffs()[i] + k[1] as f64 * v.c2.coeffs()[i])
        })
        .collect();
    TorusField::wrap(lat, coeffs)
}

/// Biot-Savart: the divergence-free zero-average field whose curl is `omega`.
pub fn biot_savart(omega: &TorusField) -> Result<VectorField2, SpectralError> {
    omega.require_zero_mean(MEAN_TOL)?;
    // (d_2, -d_1)(-Delta)^{-1}: multiplier (i k_2, -i k_1)/|k|^2
    let lat = omega.lattice();
    let mut c1 = Vec::with_capacity(lat.len());
    let mut c2 = Vec::with_capacity(lat.len());
    for (i, &c) in omega.coeffs().iter().enumerate() {
        let k = lat.mode(i);
        let k2 = norm_sq(k);
        if k2 == 0.0 {
            c1.push(Complex64::new(0.0, 0.0));
            c2.push(Complex64::new(0.0, 0.0));
        } else {
            c1.push(I * k[1] as f64 * c / k2);
            c2.push(-I * k[0] as f64 * c / k2);
        }
    }
    Ok(VectorField2 {
        c1: TorusField::wrap(lat, c1),
        c2: TorusField::wrap(lat, c2),
    })
}
