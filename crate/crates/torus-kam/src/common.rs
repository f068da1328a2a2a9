use std::collections::BTreeMap;

use serde::Serialize;
use tk_diophantine::{draw_diophantine, linear_fit, DioParams, Region};
use tk_mhd::{build_forcing, ForcingSpec, PhysParams};
use tk_nash_moser::default_gamma;
use tk_spectral::Lattice;

use crate::{CliError, ResolvedConfig};

pub(crate) fn dio_params(gamma: f64, tau: f64, k_check: usize) -> Result<DioParams, CliError> {
    DioParams::new(gamma, tau, k_check).map_err(|e| CliError::Invalid(e.to_string()))
}

/// The configured frequency, or the first draw from `[1,2]^2` passing the
/// condition at `draw_gamma`.
pub(crate) fn omega(rc: &ResolvedConfig) -> Result<[f64; 2], CliError> {
    let c = &rc.config;
    if let Some(w) = c.omega {
        return Ok(w);
    }
    let p = dio_params(c.dio.draw_gamma, c.dio.tau, c.dio.k_check)?;
    draw_diophantine(Region::unit_shifted(), &p, c.seed, 100_000).ok_or_else(|| {
        CliError::Invalid(format!(
            "no frequency in DC({}, {}) found in 1e5 draws",
            c.dio.draw_gamma, c.dio.tau
        ))
    })
}

pub(crate) fn gamma(rc: &ResolvedConfig, p: &PhysParams) -> f64 {
    rc.config.dio.gamma.unwrap_or_else(|| default_gamma(p))
}

pub(crate) fn forcing(rc: &ResolvedConfig, lat: Lattice, p: &PhysParams) -> Result<ForcingSpec, CliError> {
    Ok(build_forcing(lat, &rc.forcing_modes, p.b_avg)?)
}

/// Slope of `ln y` against `ln x`.
#[derive(Clone, Copy, Debug, Serialize)]
pub(crate) struct Slope {
    pub slope: f64,
    pub target: f64,
    pub tolerance: f64,
}

pub(crate) fn loglog(xs: &[f64], ys: &[f64], target: f64, tolerance: f64) -> Slope {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    Slope {
        slope: linear_fit(&lx, &ly).slope,
        target,
        tolerance,
    }
}

impl Slope {
    pub fn within(&self) -> bool {
        (self.slope - self.target).abs() <= self.tolerance
    }

    pub fn at_most(&self) -> bool {
        self.slope <= self.target + self.tolerance
    }
}

pub(crate) fn checks<const N: usize>(items: [(&str, bool); N]) -> BTreeMap<String, bool> {
    items.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}
