use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::Rng;

use crate::fft::fft2;
use crate::lattice::{bracket, norm_sq, Lattice};
use crate::SpectralError;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Truncated Fourier series `u(x) = sum_k u_k e^{i k.x}` on the lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusField {
    lattice: Lattice,
    coeffs: Vec<Complex64>,
    zero_average: bool,
}

impl TorusField {
    pub fn zeros(lattice: Lattice) -> Self {
        Self {
            lattice,
            coeffs: vec![ZERO; lattice.len()],
            zero_average: true,
        }
    }

    pub fn from_coeffs(lattice: Lattice, coeffs: Vec<Complex64>) -> Result<Self, SpectralError> {
        if coeffs.len() != lattice.len() {
            return Err(SpectralError::Format(format!(
                "expected {} coefficients, got {}",
                lattice.len(),
                coeffs.len()
            )));
        }
        Ok(Self::wrap(lattice, coeffs))
    }

    pub(crate) fn wrap(lattice: Lattice, coeffs: Vec<Complex64>) -> Self {
        let zero_average = coeffs[lattice.zero_index()] == ZERO;
        Self {
            lattice,
            coeffs,
            zero_average,
        }
    }

    pub fn from_fn(lattice: Lattice, mut f: impl FnMut([i32; 2]) -> Complex64) -> Self {
        let coeffs = lattice.modes().map(&mut f).collect();
        Self::wrap(lattice, coeffs)
    }

    pub fn constant(lattice: Lattice, c: f64) -> Self {
        let mut u = Self::zeros(lattice);
        u.set_coeff([0, 0], Complex64::new(c, 0.0));
        u
    }

    /// The complex exponential `amp * e^{i k.x}`.
    pub fn exp_mode(lattice: Lattice, k: [i32; 2], amp: Complex64) -> Self {
        let mut u = Self::zeros(lattice);
        u.set_coeff(k, amp);
        u
    }

    /// `amp * cos(k.x)`.
    pub fn cos_mode(lattice: Lattice, k: [i32; 2], amp: f64) -> Self {
        let mut u = Self::zeros(lattice);
        let half = Complex64::new(amp / 2.0, 0.0);
        u.add_coeff(k, half);
        u.add_coeff([-k[0], -k[1]], half);
        u
    }

    /// `amp * sin(k.x)`.
    pub fn sin_mode(lattice: Lattice, k: [i32; 2], amp: f64) -> Self {
        let mut u = Self::zeros(lattice);
        u.add_coeff(k, Complex64::new(0.0, -amp / 2.0));
        u.add_coeff([-k[0], -k[1]], Complex64::new(0.0, amp / 2.0));
        u
    }

    /// Random real zero-average field on modes `|k_i| <= band` with
    /// amplitudes decaying like `<k>^{-decay}`.
    pub fn random_smooth<R: Rng + ?Sized>(lattice: Lattice, rng: &mut R, band: usize, decay: f64) -> Self {
        let band = band.min(lattice.n_max()) as i32;
        let mut u = Self::zeros(lattice);
        for k1 in -band..=band {
            for k2 in -band..=band {
                let k = [k1, k2];
                // one representative per +-k pair
                if (k1, k2) <= (0, 0) {
                    continue;
                }
                let w = bracket(k).powf(-decay);
                let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * w;
                u.set_coeff(k, c);
                u.set_coeff([-k1, -k2], c.conj());
            }
        }
        u
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn coeff(&self, k: [i32; 2]) -> Complex64 {
        self.lattice.index(k).map_or(ZERO, |i| self.coeffs[i])
    }

    pub fn set_coeff(&mut self, k: [i32; 2], c: Complex64) {
        if let Some(i) = self.lattice.index(k) {
            self.coeffs[i] = c;
            if i == self.lattice.zero_index() {
                self.zero_average = c == ZERO;
            }
        }
    }

    pub fn add_coeff(&mut self, k: [i32; 2], c: Complex64) {
        let cur = self.coeff(k);
        self.set_coeff(k, cur + c);
    }

    pub fn mean(&self) -> Complex64 {
        self.coeffs[self.lattice.zero_index()]
    }

    pub fn is_zero_average(&self) -> bool {
        self.zero_average
    }

    /// `max_k |u_{-k} - conj(u_k)|`.
    pub fn reality_defect(&self) -> f64 {
        let lat = self.lattice;
        let len = lat.len();
        (0..len)
            .map(|i| (self.coeffs[len - 1 - i] - self.coeffs[i].conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Projects onto real fields: `u_k <- (u_k + conj(u_{-k}))/2`.
    pub fn real_part(&self) -> Self {
        let len = self.lattice.len();
        let coeffs = (0..len)
            .map(|i| (self.coeffs[i] + self.coeffs[len - 1 - i].conj()) * 0.5)
            .collect();
        Self::wrap(self.lattice, coeffs)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest `max(|k_1|,|k_2|)` among nonzero coefficients.
    pub fn band(&self) -> usize {
        self.lattice
            .modes()
            .zip(&self.coeffs)
            .filter(|(_, c)| **c != ZERO)
            .map(|(k, _)| k[0].unsigned_abs().max(k[1].unsigned_abs()) as usize)
            .max()
            .unwrap_or(0)
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<(), SpectralError> {
        if self.lattice.n_max() != other.lattice.n_max() {
            return Err(SpectralError::LatticeMismatch(
                self.lattice.n_max(),
                other.lattice.n_max(),
            ));
        }
        Ok(())
    }

    pub(crate) fn map_modes(&self, mut f: impl FnMut([i32; 2], Complex64) -> Complex64) -> Self {
        let lat = self.lattice;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| f(lat.mode(i), c))
            .collect();
        Self::wrap(lat, coeffs)
    }

    pub fn scale(&self, a: f64) -> Self {
        self.map_modes(|_, c| c * a)
    }

    pub fn scale_c(&self, a: Complex64) -> Self {
        self.map_modes(|_, c| c * a)
    }

    /// `self += a * x`.
    pub fn axpy(&mut self, a: Complex64, x: &Self) {
        assert_eq!(self.lattice.n_max(), x.lattice.n_max(), "lattice mismatch");
        for (s, xv) in self.coeffs.iter_mut().zip(&x.coeffs) {
            *s += a * xv;
        }
        self.zero_average = self.mean() == ZERO;
    }

    /// Copy onto another lattice, truncating or zero-padding.
    pub fn resample(&self, lattice: Lattice) -> Self {
        let mut out = Self::zeros(lattice);
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != ZERO {
                out.set_coeff(self.lattice.mode(i), c);
            }
        }
        out
    }

    // ---- norms -----------------------------------------------------------

    /// `(sum_k <k>^{2s} |u_k|^2)^{1/2}`.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        let lat = self.lattice;
        let plain = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let w = (1.0 + norm_sq(lat.mode(i))).powf(s);
                w * c.norm_sqr()
            })
            .sum::<f64>()
            .sqrt();
        if plain.is_finite() {
            plain
        } else {
            self.log_sobolev_norm(s).exp()
        }
    }

    /// `ln ||u||_s`, summed in log space so that large `s` does not overflow.
    pub fn log_sobolev_norm(&self, s: f64) -> f64 {
        let lat = self.lattice;
        let logs: Vec<f64> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(i, c)| s * (1.0 + norm_sq(lat.mode(i))).ln() + c.norm_sqr().ln())
            .collect();
        let m = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if m == f64::NEG_INFINITY {
            return m;
        }
        0.5 * (m + logs.iter().map(|l| (l - m).exp()).sum::<f64>().ln())
    }

    /// `L^2` norm with the normalized measure `dx/(2 pi)^2`.
    pub fn l2_norm(&self) -> f64 {
        self.sobolev_norm(0.0)
    }

    /// `sum_k conj(u_k) v_k`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    // ---- projectors ------------------------------------------------------

    /// Keeps modes with `|k| <= n`.
    pub fn project_low(&self, n: f64) -> Self {
        let n2 = n * n;
        self.map_modes(|k, c| if norm_sq(k) <= n2 { c } else { ZERO })
    }

    /// Keeps modes with `|k| > n`.
    pub fn project_high(&self, n: f64) -> Self {
        let n2 = n * n;
        self.map_modes(|k, c| if norm_sq(k) <= n2 { ZERO } else { c })
    }

    pub fn zero_mean_project(&self) -> Self {
        let mut out = self.clone();
        out.set_coeff([0, 0], ZERO);
        out
    }

    pub(crate) fn require_zero_mean(&self, tol: f64) -> Result<(), SpectralError> {
        let m = self.mean().norm();
        if m > tol * self.l2_norm().max(1.0) {
            return Err(SpectralError::NonzeroMean(m));
        }
        Ok(())
    }

    // ---- physical space --------------------------------------------------

    /// Values on the uniform `m x m` grid `x_j = 2 pi j / m`, row-major in
    /// `(j_1, j_2)`. Requires `m >= 2 n_max + 1`.
    pub fn to_grid(&self, m: usize) -> Vec<Complex64> {
        assert!(m > 2 * self.lattice.n_max(), "grid too coarse");
        let mut buf = vec![ZERO; m * m];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != ZERO {
                let k = self.lattice.mode(i);
                let a = k[0].rem_euclid(m as i32) as usize;
                let b = k[1].rem_euclid(m as i32) as usize;
                buf[a * m + b] = c;
            }
        }
        fft2(&mut buf, m, true);
        buf
    }

    /// Discrete Fourier coefficients of grid samples, truncated to `lattice`.
    pub fn from_grid(lattice: Lattice, values: &[Complex64], m: usize) -> Self {
        assert_eq!(values.len(), m * m);
        assert!(m > 2 * lattice.n_max(), "grid too coarse");
        let mut buf = values.to_vec();
        fft2(&mut buf, m, false);
        let inv = 1.0 / (m * m) as f64;
        Self::from_fn(lattice, |k| {
            let a = k[0].rem_euclid(m as i32) as usize;
            let b = k[1].rem_euclid(m as i32) as usize;
            buf[a * m + b] * inv
        })
    }

    /// Point evaluation by direct Fourier synthesis at arbitrary points.
    pub fn eval_at(&self, points: &[[f64; 2]]) -> Vec<Complex64> {
        let n = self.lattice.n_max() as i32;
        let side = self.lattice.side();
        let mut e1 = vec![ZERO; side];
        let mut e2 = vec![ZERO; side];
        points
            .iter()
            .map(|p| {
                for j in -n..=n {
                    let u = (j + n) as usize;
                    e1[u] = Complex64::cis(j as f64 * p[0]);
                    e2[u] = Complex64::cis(j as f64 * p[1]);
                }
                let mut acc = ZERO;
                for (row, ea) in self.coeffs.chunks_exact(side).zip(&e1) {
                    let inner: Complex64 = row.iter().zip(&e2).map(|(c, e)| c * e).sum();
                    acc += ea * inner;
                }
                acc
            })
            .collect()
    }
}

impl Add for &TorusField {
    type Output = TorusField;
    fn add(self, rhs: &TorusField) -> TorusField {
        assert_eq!(self.lattice.n_max(), rhs.lattice.n_max(), "lattice mismatch");
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        TorusField::wrap(self.lattice, coeffs)
    }
}

impl Sub for &TorusField {
    type Output = TorusField;
    fn sub(self, rhs: &TorusField) -> TorusField {
        assert_eq!(self.lattice.n_max(), rhs.lattice.n_max(), "lattice mismatch");
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        TorusField::wrap(self.lattice, coeffs)
    }
}

impl Neg for &TorusField {
    type Output = TorusField;
    fn neg(self) -> TorusField {
        self.scale(-1.0)
    }
}

impl Mul<&TorusField> for f64 {
    type Output = TorusField;
    fn mul(self, rhs: &TorusField) -> TorusField {
        rhs.scale(self)
    }
}
