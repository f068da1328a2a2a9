#![allow(dead_code)]

use tk_diophantine::{draw_diophantine, DioParams, Region};
use tk_mhd::{build_forcing, default_forcing_modes, ForcingModes, ForcingSpec, ModeEntry, PhysParams};
use tk_nash_moser::{default_gamma, NMConfig, Problem};
use tk_spectral::{Lattice, ProductEngine};

pub fn lattice() -> Lattice {
    Lattice::new(16).with_engine(ProductEngine::Direct)
}

/// Satisfies the condition at 0.6 on `|k| <= 64`, above every `gamma_n`
/// used here.
pub fn omega() -> [f64; 2] {
    let p = DioParams::new(0.6, 2.0, 64).unwrap();
    draw_diophantine(Region::unit_shifted(), &p, 11, 100_000).unwrap()
}

pub fn params(lam: f64) -> PhysParams {
    PhysParams::default().with_lam(lam)
}

pub fn forcing(p: &PhysParams) -> ForcingSpec {
    build_forcing(lattice(), &default_forcing_modes(), p.b_avg).unwrap()
}

/// `f = (0, 2 sin x_1)`: every field of `x_1` alone has vanishing
/// nonlinear terms, so the problem is linear.
pub fn shear_forcing(p: &PhysParams) -> ForcingSpec {
    let modes = ForcingModes {
        c1: vec![],
        c2: vec![
            ModeEntry { k: [1, 0], re: 0.0, im: -1.0 },
            ModeEntry { k: [-1, 0], re: 0.0, im: 1.0 },
        ],
    };
    build_forcing(lattice(), &modes, p.b_avg).unwrap()
}

pub fn problem(lam: f64) -> Problem {
    let p = params(lam);
    Problem::new(p, omega(), forcing(&p), default_gamma(&p))
}

pub fn config(lam: f64) -> NMConfig {
    NMConfig::for_params(&params(lam))
}
