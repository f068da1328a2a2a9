//! Monte Carlo measure of resonant frequencies in `[1,2]^2`.

use serde::Serialize;
use tk_diophantine::{is_diophantine, measure_estimate, Region};
use tk_spectral::norm;

use crate::common::{checks, dio_params, loglog, Slope};
use crate::{CliError, Output, ResolvedConfig, Summary};

/// Bound constant for a single strip, `meas <= C gamma / |k|^{tau+1}`:
/// 1.5 times the exact `k = (1,-1)` value `2^{3/2} (1 - gamma/4)` at
/// `gamma = 0.1`.
pub const STRIP_CONSTANT: f64 = 4.14;

#[derive(Clone, Debug, Default, Serialize)]
pub struct DioRow {
    pub gamma: f64,
    pub estimate: f64,
    pub ci95: f64,
    pub failures: u64,
    pub n_samples: u64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct StripRow {
    pub k1: i32,
    pub k2: i32,
    pub k_norm: f64,
    pub estimate: f64,
    /// `estimate |k|^{tau+1} / gamma`.
    pub scaled: f64,
}

#[derive(Clone, Debug, Serialize)]
struct MeasureResults {
    slope: Slope,
    max_strip_scaled: f64,
    strip_constant: f64,
}

/// One representative of each `+-k` pair with `0 < |k| <= r`.
fn half_disk(r: i32) -> Vec<[i32; 2]> {
    let mut ks = Vec::new();
    for k1 in 0..=r {
        for k2 in -r..=r {
            let k = [k1, k2];
            if (k1 > 0 || k2 > 0) && k1 * k1 + k2 * k2 <= r * r {
                ks.push(k);
            }
        }
    }
    ks
}

pub(crate) fn run(rc: &ResolvedConfig, out: &mut Output) -> Result<Summary, CliError> {
    let c = &rc.config;
    let m = &c.measure;
    let tau = c.dio.tau;
    let region = Region::unit_shifted();
    let mut rows = Vec::new();
    for &g in &m.gammas {
        let p = dio_params(g, tau, m.k_check)?;
        let e = measure_estimate(|w| is_diophantine(w, &p).ok, region, m.n_samples, c.seed);
        rows.push(DioRow {
            gamma: g,
            estimate: e.estimate,
            ci95: e.ci95,
            failures: e.failures,
            n_samples: e.n_samples,
        });
    }
    out.write_csv("diophantine", &rows)?;
    let slope = loglog(
        &rows.iter().map(|r| r.gamma).collect::<Vec<_>>(),
        &rows.iter().map(|r| r.estimate).collect::<Vec<_>>(),
        1.0,
        0.2,
    );

    let g = m.strip_gamma;
    let strips: Vec<StripRow> = half_disk(m.strip_k_max)
        .into_iter()
        .map(|k| {
            let r = norm(k);
            let width = g / r.powf(tau);
            let kf = [k[0] as f64, k[1] as f64];
            let e = measure_estimate(
                move |w| (w[0] * kf[0] + w[1] * kf[1]).abs() >= width,
                region,
                m.strip_samples,
                c.seed,
            );
            StripRow {
                k1: k[0],
                k2: k[1],
                k_norm: r,
                estimate: e.estimate,
                scaled: e.estimate * r.powf(tau + 1.0) / g,
            }
        })
        .collect();
    out.write_csv("strips", &strips)?;
    let max_strip_scaled = strips.iter().map(|s| s.scaled).fold(0.0, f64::max);
    let checks = checks([
        ("linear_in_gamma", slope.within()),
        ("strip_bound", max_strip_scaled <= STRIP_CONSTANT),
    ]);
    out.finish(
        checks,
        MeasureResults {
            slope,
            max_strip_scaled,
            strip_constant: STRIP_CONSTANT,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_disk_counts() {
        // 12 nonzero modes with |k| <= 2 in the full disk
        assert_eq!(half_disk(2).len(), 6);
        assert!(half_disk(3).iter().all(|k| !half_disk(3).contains(&[-k[0], -k[1]])));
    }
}
