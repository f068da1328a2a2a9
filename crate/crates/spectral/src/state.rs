use crate::calculus::MEAN_TOL;
use crate::field::TorusField;
use crate::lattice::Lattice;
use crate::SpectralError;

/// Vorticity and current density `(Omega, J)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StatePair {
    pub omega_field: TorusField,
    pub current_field: TorusField,
}

impl StatePair {
    /// Checks shared lattice and zero averages.
    pub fn new(omega_field: TorusField, current_field: TorusField) -> Result<Self, SpectralError> {
        omega_field.check_same(&current_field)?;
        omega_field.require_zero_mean(MEAN_TOL)?;
        current_field.require_zero_mean(MEAN_TOL)?;
        Ok(Self {
            omega_field,
            current_field,
        })
    }

    pub fn zeros(lattice: Lattice) -> Self {
        Self {
            omega_field: TorusField::zeros(lattice),
            current_field: TorusField::zeros(lattice),
        }
    }

    pub fn lattice(&self) -> Lattice {
        self.omega_field.lattice()
    }

    /// `||Omega||_s + ||J||_s`.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        self.omega_field.sobolev_norm(s) + self.current_field.sobolev_norm(s)
    }

    pub fn reality_defect(&self) -> f64 {
        self.omega_field
            .reality_defect()
            .max(self.current_field.reality_defect())
    }

    pub fn scale(&self, a: f64) -> Self {
        self.map(|u| u.scale(a))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            omega_field: &self.omega_field + &other.omega_field,
            current_field: &self.current_field + &other.current_field,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            omega_field: &self.omega_field - &other.omega_field,
            current_field: &self.current_field - &other.current_field,
        }
    }

    pub fn map(&self, f: impl Fn(&TorusField) -> TorusField) -> Self {
        Self {
            omega_field: f(&self.omega_field),
            current_field: f(&self.current_field),
        }
    }

    pub fn project_low(&self, n: f64) -> Self {
        self.map(|u| u.project_low(n))
    }

    pub fn resample(&self, lattice: Lattice) -> Self {
        self.map(|u| u.resample(lattice))
    }

    /// Concatenated coefficients `(Omega, J)`.
    pub fn to_vec(&self) -> Vec<num_complex::Complex64> {
        let mut v = self.omega_field.coeffs().to_vec();
        v.extend_from_slice(self.current_field.coeffs());
        v
    }

    pub fn from_vec(lattice: Lattice, v: &[num_complex::Complex64]) -> Result<Self, SpectralError> {
        let n = lattice.len();
        if v.len() != 2 * n {
            return Err(SpectralError::Format(format!(
                "expected {} coefficients, got {}",
                2 * n,
                v.len()
            )));
        }
        Ok(Self {
            omega_field: TorusField::from_coeffs(lattice, v[..n].to_vec())?,
            current_field: TorusField::from_coeffs(lattice, v[n..].to_vec())?,
        })
    }
}
