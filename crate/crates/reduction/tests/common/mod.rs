#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tk_diophantine::{draw_diophantine, invert_l_lambda, DioParams, Region};
use tk_linearization::{assemble, LinearizedOperator, ModeSpace};
use tk_mhd::{build_forcing, default_forcing_modes, forcing_scale, PhysParams};
use tk_reduction::ReductionConfig;
use tk_spectral::{Complex64, Lattice, ProductEngine, StatePair, TorusField};

pub const GAMMA: f64 = 0.3;

pub fn params() -> PhysParams {
    PhysParams::default()
}

pub fn lattice(n: usize) -> Lattice {
    Lattice::new(n).with_engine(ProductEngine::Direct)
}

/// A frequency satisfying the condition with twice the working gamma, so
/// the corrected divisors keep a margin.
pub fn omega() -> [f64; 2] {
    let p = DioParams::new(2.0 * GAMMA, 2.0, 64).unwrap();
    draw_diophantine(Region::unit_shifted(), &p, 11, 100_000).expect("diophantine draw")
}

pub fn config() -> ReductionConfig {
    ReductionConfig::default().with_gamma(GAMMA)
}

/// `(lam^{1-2d/3} L_lam^{-1} F, 0)`.
pub fn approx_state(lat: Lattice, p: &PhysParams, omega: [f64; 2]) -> StatePair {
    let forcing = build_forcing(lat, &default_forcing_modes(), p.b_avg).unwrap();
    let om = invert_l_lambda(omega, p.lam, &forcing.f_curl.scale(forcing_scale(p))).unwrap();
    StatePair {
        omega_field: om,
        current_field: TorusField::zeros(lat),
    }
}

/// The approximate solution plus a small band-3 perturbation in both
/// components.
pub fn nontrivial_state(lat: Lattice, p: &PhysParams, omega: [f64; 2], seed: u64, amp: f64) -> StatePair {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = approx_state(lat, p, omega);
    let dom = TorusField::random_smooth(lat, &mut rng, 3, 2.0).scale(amp);
    let dj = TorusField::random_smooth(lat, &mut rng, 3, 2.0).scale(amp);
    StatePair {
        omega_field: &base.omega_field + &dom,
        current_field: dj,
    }
}

pub fn operator(state: &StatePair, p: &PhysParams, omega: [f64; 2]) -> LinearizedOperator {
    assemble(state, p, omega).unwrap()
}

/// Random right-hand side supported on `0 < |k| <= radius`.
pub fn random_rhs(lat: Lattice, radius: f64, seed: u64) -> StatePair {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sp = ModeSpace::new(lat, radius).unwrap();
    let v: Vec<Complex64> = (0..sp.dim())
        .map(|_| {
            use rand::Rng;
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
        .collect();
    sp.embed(&v)
}

pub fn rel_diff(a: &StatePair, b: &StatePair, s: f64) -> f64 {
    a.sub(b).sobolev_norm(s) / b.sobolev_norm(s)
}

pub fn mat_vec(a: &tk_reduction::CMat, x: &[Complex64]) -> Vec<Complex64> {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| a[(i, j)] * x[j]).sum())
        .collect()
}

pub fn vec_rel(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (num / den).sqrt()
}

/// Frobenius distance relative to `b`.
pub fn mat_rel(a: &tk_reduction::CMat, b: &tk_reduction::CMat) -> f64 {
    (a - b).norm_l2() / b.norm_l2()
}

/// LU solve, independent of the reduction chain.
pub fn lu_solve(a: &tk_reduction::CMat, b: &[Complex64]) -> Vec<Complex64> {
    use faer::linalg::solvers::Solve;
    let mut x = faer::Col::from_fn(b.len(), |i| b[i]);
    a.partial_piv_lu().solve_in_place(&mut x);
    (0..b.len()).map(|i| x[i]).collect()
}

pub fn modes(lat: Lattice, radius: f64) -> tk_reduction::Modes {
    tk_reduction::Modes::new(ModeSpace::new(lat, radius).unwrap())
}
