use serde::{Deserialize, Serialize};

use crate::SpectralError;

/// How quadratic products are evaluated.
///
/// `Fft` transforms to a collocation grid of `collocation_size` points per
/// axis, multiplies pointwise and transforms back. `Direct` runs the sparse
/// discrete convolution over nonzero coefficients; it is slower for dense
/// fields but its rounding error stays relative to each output mode, which
/// matters when residuals are measured in high Sobolev norms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ProductEngine {
    #[default]
    Fft,
    Direct,
}

/// Square frequency lattice `|k_1|, |k_2| <= n_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lattice {
    n_max: usize,
    collocation_size: usize,
    engine: ProductEngine,
}

impl Lattice {
    pub fn new(n_max: usize) -> Self {
        Self {
            n_max,
            collocation_size: 3 * n_max + 1,
            engine: ProductEngine::Fft,
        }
    }

    /// Override the collocation grid; it must keep quadratic products alias-free.
    pub fn with_collocation(self, collocation_size: usize) -> Result<Self, SpectralError> {
        let need = 3 * self.n_max + 1;
        if collocation_size < need {
            return Err(SpectralError::Collocation {
                got: collocation_size,
                need,
            });
        }
        Ok(Self {
            collocation_size,
            ..self
        })
    }

    pub fn with_engine(self, engine: ProductEngine) -> Self {
        Self { engine, ..self }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn collocation_size(&self) -> usize {
        self.collocation_size
    }

    pub fn engine(&self) -> ProductEngine {
        self.engine
    }

    /// Points per axis of the coefficient array, `2 n_max + 1`.
    pub fn side(&self) -> usize {
        2 * self.n_max + 1
    }

    pub fn len(&self) -> usize {
        self.side() * self.side()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Row-major index of `k`, `None` outside the lattice.
    #[inline]
    pub fn index(&self, k: [i32; 2]) -> Option<usize> {
        let n = self.n_max as i32;
        if k[0].abs() > n || k[1].abs() > n {
            return None;
        }
        let side = self.side();
        Some((k[0] + n) as usize * side + (k[1] + n) as usize)
    }

    #[inline]
    pub fn mode(&self, idx: usize) -> [i32; 2] {
        let side = self.side();
        let n = self.n_max as i32;
        [(idx / side) as i32 - n, (idx % side) as i32 - n]
    }

    pub fn zero_index(&self) -> usize {
        self.len() / 2
    }

    pub fn modes(&self) -> impl Iterator<Item = [i32; 2]> + '_ {
        (0..self.len()).map(move |i| self.mode(i))
    }

    pub fn contains(&self, k: [i32; 2]) -> bool {
        self.index(k).is_some()
    }

    /// Largest Euclidean mode radius on the lattice.
    pub fn max_radius(&self) -> f64 {
        self.n_max as f64 * std::f64::consts::SQRT_2
    }
}

#[inline]
pub fn norm_sq(k: [i32; 2]) -> f64 {
    let (a, b) = (k[0] as f64, k[1] as f64);
    a * a + b * b
}

#[inline]
pub fn norm(k: [i32; 2]) -> f64 {
    norm_sq(k).sqrt()
}

/// Japanese bracket `<k> = (1 + |k|^2)^{1/2}`.
#[inline]
pub fn bracket(k: [i32; 2]) -> f64 {
    (1.0 + norm_sq(k)).sqrt()
}

#[inline]
pub fn dot(w: [f64; 2], k: [i32; 2]) -> f64 {
    w[0] * k[0] as f64 + w[1] * k[1] as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_roundtrip_and_symmetry() {
        let lat = Lattice::new(3);
        for (i, k) in lat.modes().enumerate() {
            assert_eq!(lat.index(k), Some(i));
            assert!(lat.contains([-k[0], -k[1]]));
        }
        assert_eq!(lat.mode(lat.zero_index()), [0, 0]);
        assert_eq!(lat.index([4, 0]), None);
    }

    #[test]
    fn collocation_guard() {
        assert_eq!(Lattice::new(32).collocation_size(), 97);
        assert!(Lattice::new(4).with_collocation(12).is_err());
        assert!(Lattice::new(4).with_collocation(16).is_ok());
    }
}
