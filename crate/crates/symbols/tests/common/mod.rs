#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tk_spectral::{bracket, Complex64};
use tk_symbols::SymbolGrid;

/// Random symbol with `|a^(k, xi)| ~ <k>^{-2} <xi>^order`, optionally real.
pub fn random_symbol(rng: &mut ChaCha8Rng, n_x: usize, ext: usize, order: f64, real: bool) -> SymbolGrid {
    let raw: Vec<Complex64> = (0..(2 * n_x + 1).pow(2) * (2 * ext + 1).pow(2))
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let w = (2 * ext + 1).pow(2);
    let a = SymbolGrid::from_fn(n_x, ext, order, |k, xi| {
        let i = ((k[0] + n_x as i32) as usize * (2 * n_x + 1) + (k[1] + n_x as i32) as usize) * w
            + (xi[0] + ext as i32) as usize * (2 * ext + 1)
            + (xi[1] + ext as i32) as usize;
        raw[i] * bracket(k).powi(-2) * bracket(xi).powf(order)
    });
    if real {
        SymbolGrid::from_fn(n_x, ext, order, |k, xi| {
            (a.hat(k, xi) + a.hat([-k[0], -k[1]], [-xi[0], -xi[1]]).conj()) * 0.5
        })
    } else {
        a
    }
}
