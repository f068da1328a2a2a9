use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use tk_spectral::{curl, dot, norm, Complex64, Lattice, TorusField, VectorField2};

use crate::MhdError;

/// One Fourier coefficient of a forcing component.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeEntry {
    pub k: [i32; 2],
    pub re: f64,
    pub im: f64,
}

/// Fourier modes of the two components of `f`, as read from a forcing file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForcingModes {
    pub c1: Vec<ModeEntry>,
    pub c2: Vec<ModeEntry>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ForcingSpec {
    pub f: VectorField2,
    /// `F = d_1 f_2 - d_2 f_1`.
    pub f_curl: TorusField,
    /// Witness with `b.kbar != 0` and `F(kbar) != 0`.
    pub kbar: [i32; 2],
    /// Non-degeneracy constant for the lower bound on `b . grad Omega_app`.
    pub k_const: f64,
}

/// Largest `|omega|` over the frequency box `[1,2]^2`.
const OMEGA_SUP: f64 = 2.0 * std::f64::consts::SQRT_2;

fn push_real(list: &mut Vec<ModeEntry>, k: [i32; 2], c: Complex64) {
    list.push(ModeEntry { k, re: c.re, im: c.im });
    list.push(ModeEntry {
        k: [-k[0], -k[1]],
        re: c.re,
        im: -c.im,
    });
}

/// Six real trigonometric terms:
/// `f_1 = sin x_2 + 0.5 cos(x_1 + x_2) + 0.3 sin(2 x_1 - x_2)`,
/// `f_2 = cos x_1 + 0.4 sin(x_1 - 2 x_2) + 0.25 cos(2 x_1 + x_2)`.
/// The field has both curl and divergence.
pub fn default_forcing_modes() -> ForcingModes {
    let cos = |a: f64| Complex64::new(a / 2.0, 0.0);
    let sin = |a: f64| Complex64::new(0.0, -a / 2.0);
    let mut c1 = Vec::new();
    push_real(&mut c1, [0, 1], sin(1.0));
    push_real(&mut c1, [1, 1], cos(0.5));
    push_real(&mut c1, [2, -1], sin(0.3));
    let mut c2 = Vec::new();
    push_real(&mut c2, [1, 0], cos(1.0));
    push_real(&mut c2, [1, -2], sin(0.4));
    push_real(&mut c2, [2, 1], cos(0.25));
    ForcingModes { c1, c2 }
}

fn component(lattice: Lattice, entries: &[ModeEntry]) -> Result<TorusField, MhdError> {
    let mut table = BTreeMap::new();
    for e in entries {
        if e.k == [0, 0] {
            return Err(MhdError::ForcingMean);
        }
        if !lattice.contains(e.k) {
            return Err(MhdError::ForcingRange(e.k));
        }
        *table.entry(e.k).or_insert(Complex64::new(0.0, 0.0)) += Complex64::new(e.re, e.im);
    }
    for (&k, &c) in &table {
        let partner = table.get(&[-k[0], -k[1]]).copied().unwrap_or_default();
        if (partner - c.conj()).norm() > 1e-14 * c.norm().max(1.0) {
            return Err(MhdError::ForcingReality(k));
        }
    }
    let mut u = TorusField::zeros(lattice);
    for (k, c) in table {
        u.set_coeff(k, c);
    }
    Ok(u)
}

/// Builds `f`, its curl and the witness `kbar`.
///
/// Among admissible modes the witness maximizes `|b.k| |F(k)| / |k|`; ties
/// go to the first mode in lattice order. The constant
/// `K = C |b.kbar|^2 |F(kbar)|^2 / |kbar|^2` uses
/// `C = 1 / ((1 + 2 sqrt 2) |kbar| max(1, |b.kbar| |F(kbar)| / |kbar|))`, which
/// makes `||b . grad Omega_app||_{L^2} >= lam^{-2 delta/3} K` hold for every
/// `omega` in `[1,2]^2` and `lam >= 1`.
pub fn build_forcing(lattice: Lattice, modes: &ForcingModes, b_avg: [f64; 2]) -> Result<ForcingSpec, MhdError> {
    let f = VectorField2::new(component(lattice, &modes.c1)?, component(lattice, &modes.c2)?)?;
    let f_curl = curl(&f);
    let mut best: Option<([i32; 2], f64)> = None;
    for (i, c) in f_curl.coeffs().iter().enumerate() {
        let k = lattice.mode(i);
        let bk = dot(b_avg, k);
        if k == [0, 0] || c.norm() == 0.0 || bk == 0.0 {
            continue;
        }
        let x = bk.abs() * c.norm() / norm(k);
        if best.is_none_or(|(_, bx)| x > bx) {
            best = Some((k, x));
        }
    }
    let (kbar, x) = best.ok_or(MhdError::Degenerate)?;
    let c = 1.0 / ((1.0 + OMEGA_SUP) * norm(kbar) * x.max(1.0));
    Ok(ForcingSpec {
        f,
        f_curl,
        kbar,
        k_const: c * x * x,
    })
}
