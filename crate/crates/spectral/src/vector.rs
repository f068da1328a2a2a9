use num_complex::Complex64;

use crate::field::TorusField;
use crate::lattice::Lattice;
use crate::SpectralError;

/// A pair of scalar fields on a common lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField2 {
    pub c1: TorusField,
    pub c2: TorusField,
}

impl VectorField2 {
    pub fn new(c1: TorusField, c2: TorusField) -> Result<Self, SpectralError> {
        c1.check_same(&c2)?;
        Ok(Self { c1, c2 })
    }

    pub fn zeros(lattice: Lattice) -> Self {
        Self {
            c1: TorusField::zeros(lattice),
            c2: TorusField::zeros(lattice),
        }
    }

    /// The constant field `(v_1, v_2)`.
    pub fn constant(lattice: Lattice, v: [f64; 2]) -> Self {
        Self {
            c1: TorusField::constant(lattice, v[0]),
            c2: TorusField::constant(lattice, v[1]),
        }
    }

    pub fn lattice(&self) -> Lattice {
        self.c1.lattice()
    }

    pub fn component(&self, i: usize) -> &TorusField {
        if i == 0 {
            &self.c1
        } else {
            &self.c2
        }
    }

    pub fn sobolev_norm(&self, s: f64) -> f64 {
        self.c1.sobolev_norm(s).hypot(self.c2.sobolev_norm(s))
    }

    pub fn mean(&self) -> [Complex64; 2] {
        [self.c1.mean(), self.c2.mean()]
    }

    pub fn reality_defect(&self) -> f64 {
        self.c1.reality_defect().max(self.c2.reality_defect())
    }

    pub fn scale(&self, a: f64) -> Self {
        Self {
            c1: self.c1.scale(a),
            c2: self.c2.scale(a),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            c1: &self.c1 + &other.c1,
            c2: &self.c2 + &other.c2,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            c1: &self.c1 - &other.c1,
            c2: &self.c2 - &other.c2,
        }
    }

    pub fn map(&self, f: impl Fn(&TorusField) -> TorusField) -> Self {
        Self {
            c1: f(&self.c1),
            c2: f(&self.c2),
        }
    }

    pub fn resample(&self, lattice: Lattice) -> Self {
        self.map(|c| c.resample(lattice))
    }

    /// Pointwise values of both components on an `m x m` grid.
    pub fn to_grid(&self, m: usize) -> [Vec<Complex64>; 2] {
        [self.c1.to_grid(m), self.c2.to_grid(m)]
    }
}
