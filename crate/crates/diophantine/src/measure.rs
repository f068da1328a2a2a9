use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::divisor::is_diophantine;
use crate::DioParams;

/// Samples per RNG stream; chunking is fixed so results do not depend on
/// the number of worker threads.
const CHUNK: usize = 4096;

/// Axis-aligned box `[lo_1, hi_1] x [lo_2, hi_2]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub lo: [f64; 2],
    pub hi: [f64; 2],
}

impl Region {
    /// The default frequency box `[1,2]^2`.
    pub fn unit_shifted() -> Self {
        Self {
            lo: [1.0, 1.0],
            hi: [2.0, 2.0],
        }
    }

    pub fn area(&self) -> f64 {
        (self.hi[0] - self.lo[0]) * (self.hi[1] - self.lo[1])
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> [f64; 2] {
        [
            rng.gen_range(self.lo[0]..self.hi[0]),
            rng.gen_range(self.lo[1]..self.hi[1]),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureEstimate {
    /// Lebesgue measure of the set where the predicate fails.
    pub estimate: f64,
    /// Half-width of the normal-approximation 95% binomial interval.
    pub ci95: f64,
    pub failures: u64,
    pub n_samples: u64,
}

/// Monte Carlo measure of `{omega in region : !good(omega)}`.
pub fn measure_estimate<P>(good: P, region: Region, n_samples: usize, seed: u64) -> MeasureEstimate
where
    P: Fn([f64; 2]) -> bool + Sync,
{
    assert!(n_samples >= 1000, "need at least 10^3 samples");
    let chunks = n_samples.div_ceil(CHUNK);
    let failures: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = CHUNK.min(n_samples - c * CHUNK);
            (0..len).filter(|_| !good(region.sample(&mut rng))).count() as u64
        })
        .sum();
    let n = n_samples as f64;
    let frac = failures as f64 / n;
    MeasureEstimate {
        estimate: frac * region.area(),
        ci95: 1.96 * (frac * (1.0 - frac) / n).sqrt() * region.area(),
        failures,
        n_samples: n_samples as u64,
    }
}

/// First draw from `region` passing the diophantine check, if any within
/// `max_tries`.
pub fn draw_diophantine(region: Region, p: &DioParams, seed: u64, max_tries: usize) -> Option<[f64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..max_tries)
        .map(|_| region.sample(&mut rng))
        .find(|&w| is_diophantine(w, p).ok)
}
