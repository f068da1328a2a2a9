//! Second-order Taylor test of the linearized operator on random pairs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use tk_linearization::taylor_check;
use tk_spectral::{StatePair, TorusField};

use crate::common::{checks, forcing, omega};
use crate::{CliError, Output, ResolvedConfig, Summary};

#[derive(Clone, Debug, Default, Serialize)]
pub struct TaylorRow {
    pub pair: usize,
    pub eps: f64,
    pub remainder: f64,
    /// `r(eps_prev) / r(eps)`; empty on the first row of a pair.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
struct LinearizeResults {
    lam: f64,
    omega: [f64; 2],
    pairs: usize,
    pairs_passed: usize,
    max_ratio_deviation: f64,
}

fn random_pair(lat: tk_spectral::Lattice, rng: &mut ChaCha8Rng, band: usize) -> StatePair {
    StatePair {
        omega_field: TorusField::random_smooth(lat, rng, band, 1.0),
        current_field: TorusField::random_smooth(lat, rng, band, 1.0),
    }
}

pub(crate) fn run(rc: &ResolvedConfig, out: &mut Output) -> Result<Summary, CliError> {
    let c = &rc.config;
    let lc = &c.linearize;
    let lat = c.lattice.lattice();
    let w = omega(rc)?;
    let p = c.params_at(c.phys.lam)?;
    let fc = forcing(rc, lat, &p)?.f_curl;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let mut rows = Vec::new();
    let (mut passed, mut worst) = (0, 0.0f64);
    for pair in 0..lc.n_pairs {
        let state = random_pair(lat, &mut rng, lc.band);
        let h = random_pair(lat, &mut rng, lc.band);
        let r = taylor_check(&state, &h, &p, w, &fc, &lc.eps, rc.nm.s0, lc.tol)
            .map_err(|e| CliError::numeric(format!("taylor[pair={pair}]"), e))?;
        passed += usize::from(r.pass);
        for (i, (&eps, &remainder)) in r.eps.iter().zip(&r.remainders).enumerate() {
            let ratio = i.checked_sub(1).map(|j| r.ratios[j]);
            if let Some(q) = ratio {
                worst = worst.max((q / 4.0 - 1.0).abs());
            }
            rows.push(TaylorRow {
                pair,
                eps,
                remainder,
                ratio,
            });
        }
    }
    out.write_csv("remainders", &rows)?;
    let checks = checks([("quadratic_remainder", passed == lc.n_pairs && lc.n_pairs > 0)]);
    out.finish(
        checks,
        LinearizeResults {
            lam: p.lam,
            omega: w,
            pairs: lc.n_pairs,
            pairs_passed: passed,
            max_ratio_deviation: worst,
        },
    )
}
