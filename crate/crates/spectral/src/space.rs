use num_complex::Complex64;

use crate::field::TorusField;
use crate::state::StatePair;

/// Minimal vector-space interface used by Neumann series and Newton steps.
pub trait LinearSpace: Clone {
    /// `self += a * x`.
    fn axpy(&mut self, a: Complex64, x: &Self);
    fn scaled(&self, a: f64) -> Self;
    /// Norm used for convergence tests.
    fn size(&self, s: f64) -> f64;
}

impl LinearSpace for TorusField {
    fn axpy(&mut self, a: Complex64, x: &Self) {
        TorusField::axpy(self, a, x)
    }

    fn scaled(&self, a: f64) -> Self {
        self.scale(a)
    }

    fn size(&self, s: f64) -> f64 {
        self.sobolev_norm(s)
    }
}

impl LinearSpace for StatePair {
    fn axpy(&mut self, a: Complex64, x: &Self) {
        self.omega_field.axpy(a, &x.omega_field);
        self.current_field.axpy(a, &x.current_field);
    }

    fn scaled(&self, a: f64) -> Self {
        self.scale(a)
    }

    fn size(&self, s: f64) -> f64 {
        self.sobolev_norm(s)
    }
}

/// Plain coefficient vectors; `size` is the Euclidean norm for every `s`.
impl LinearSpace for Vec<Complex64> {
    fn axpy(&mut self, a: Complex64, x: &Self) {
        assert_eq!(self.len(), x.len(), "length mismatch");
        for (s, v) in self.iter_mut().zip(x) {
            *s += a * v;
        }
    }

    fn scaled(&self, a: f64) -> Self {
        self.iter().map(|c| c * a).collect()
    }

    fn size(&self, _s: f64) -> f64 {
        self.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}
