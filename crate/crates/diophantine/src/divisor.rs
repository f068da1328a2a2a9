use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::DioParams;

/// Corrections `z(k)` to the transport eigenvalues `i lam omega.k`.
/// Modes absent from the table have `z = 0`.
pub type ZTable = BTreeMap<[i32; 2], Complex64>;

/// Worst normalized divisor over the checked disk.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivisorCheck {
    pub ok: bool,
    /// `min |omega.k| |k|^tau / gamma` (or its Melnikov analogue).
    pub min_divisor: f64,
    pub argmin: [i32; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyWitness {
    pub omega: [f64; 2],
    pub gamma: f64,
    pub tau: f64,
    pub k_check: usize,
    pub dio_ok: bool,
    pub melnikov_ok: bool,
    pub min_divisor: f64,
}

fn normalized(omega: [f64; 2], k: [i32; 2], p: &DioParams) -> f64 {
    let n2 = (k[0] as f64).powi(2) + (k[1] as f64).powi(2);
    (omega[0] * k[0] as f64 + omega[1] * k[1] as f64).abs() * n2.powf(p.tau / 2.0) / p.gamma
}

/// Exact minimum of the normalized divisor over `0 < |k| <= k_check`.
///
/// Rows of the dominant axis are scanned only inside a window around the
/// real root of `omega.k = 0`; the window shrinks with the running minimum,
/// so the search stays exhaustive while touching `O(k_check)` modes.
pub fn is_diophantine(omega: [f64; 2], p: &DioParams) -> DivisorCheck {
    assert!(omega != [0.0, 0.0], "omega must be nonzero");
    let (i, j) = if omega[0].abs() >= omega[1].abs() { (1, 0) } else { (0, 1) };
    let kk = p.k_check as i64;
    let kk2 = kk * kk;
    let mk = |a: i64, b: i64| -> [i32; 2] {
        let mut k = [0i32; 2];
        k[i] = a as i32;
        k[j] = b as i32;
        k
    };
    let mut best = f64::INFINITY;
    let mut argmin = [0, 0];
    let visit = |k: [i32; 2], best: &mut f64, argmin: &mut [i32; 2]| {
        let d = normalized(omega, k, p);
        if d < *best {
            *best = d;
            *argmin = k;
        }
    };
    visit(mk(0, 1), &mut best, &mut argmin);
    visit(mk(0, -1), &mut best, &mut argmin);
    let wj = omega[j].abs();
    for a in (1..=kk).flat_map(|m| [m, -m]) {
        let rem = kk2 - a * a;
        if rem < 0 {
            continue;
        }
        let bmax = (rem as f64).sqrt().floor() as i64;
        let root = -omega[i] * a as f64 / omega[j];
        let width = best * p.gamma / (wj * (a.abs() as f64).powf(p.tau));
        let lo = ((root - width).ceil() as i64).max(-bmax);
        let hi = ((root + width).floor() as i64).min(bmax);
        for b in lo..=hi {
            visit(mk(a, b), &mut best, &mut argmin);
        }
    }
    DivisorCheck {
        ok: best >= 1.0,
        min_divisor: best,
        argmin,
    }
}

/// Plain exhaustive scan of the disk; reference for [`is_diophantine`].
pub fn min_divisor_brute(omega: [f64; 2], p: &DioParams) -> DivisorCheck {
    let kk = p.k_check as i32;
    let mut best = f64::INFINITY;
    let mut argmin = [0, 0];
    for a in -kk..=kk {
        for b in -kk..=kk {
            let n2 = a * a + b * b;
            if n2 == 0 || n2 > kk * kk {
                continue;
            }
            let d = normalized(omega, [a, b], p);
            if d < best {
                best = d;
                argmin = [a, b];
            }
        }
    }
    DivisorCheck {
        ok: best >= 1.0,
        min_divisor: best,
        argmin,
    }
}

/// `min |i lam omega.k + z(k)| |k|^tau / (lam gamma)` over `0 < |k| <= k_check`.
pub fn melnikov_check(omega: [f64; 2], lam: f64, p: &DioParams, z: &ZTable) -> DivisorCheck {
    // modes outside the table reduce to the plain condition
    let plain = is_diophantine(omega, p);
    let (mut best, mut argmin) = (plain.min_divisor, plain.argmin);
    if z.contains_key(&argmin) {
        // the plain minimizer is corrected; rescan without the shortcut
        let kk = p.k_check as i32;
        best = f64::INFINITY;
        for a in -kk..=kk {
            for b in -kk..=kk {
                let n2 = a * a + b * b;
                if n2 == 0 || n2 > kk * kk || z.contains_key(&[a, b]) {
                    continue;
                }
                let d = normalized(omega, [a, b], p);
                if d < best {
                    best = d;
                    argmin = [a, b];
                }
            }
        }
    }
    let r = p.k_check as f64;
    for (&k, &zk) in z {
        let n2 = (k[0] as f64).powi(2) + (k[1] as f64).powi(2);
        if n2 == 0.0 || n2 > r * r {
            continue;
        }
        let ev = Complex64::new(0.0, lam * (omega[0] * k[0] as f64 + omega[1] * k[1] as f64)) + zk;
        let d = ev.norm() * n2.powf(p.tau / 2.0) / (lam * p.gamma);
        if d < best {
            best = d;
            argmin = k;
        }
    }
    DivisorCheck {
        ok: best >= 1.0,
        min_divisor: best,
        argmin,
    }
}

pub fn melnikov_ok(omega: [f64; 2], lam: f64, p: &DioParams, z: &ZTable) -> bool {
    melnikov_check(omega, lam, p, z).ok
}

/// Both certificates for one frequency.
pub fn witness(omega: [f64; 2], lam: f64, p: &DioParams, z: &ZTable) -> FrequencyWitness {
    let d = is_diophantine(omega, p);
    let m = melnikov_check(omega, lam, p, z);
    FrequencyWitness {
        omega,
        gamma: p.gamma,
        tau: p.tau,
        k_check: p.k_check,
        dio_ok: d.ok,
        melnikov_ok: m.ok,
        min_divisor: d.min_divisor,
    }
}
