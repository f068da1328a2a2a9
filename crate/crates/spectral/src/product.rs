use num_complex::Complex64;

use crate::calculus::partial;
use crate::field::TorusField;
use crate::lattice::{Lattice, ProductEngine};
use crate::vector::VectorField2;
use crate::SpectralError;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Truncated product `Pi (u v)` using the lattice's product engine.
pub fn pointwise_product(u: &TorusField, v: &TorusField) -> Result<TorusField, SpectralError> {
    u.check_same(v)?;
    let w = match u.lattice().engine() {
        ProductEngine::Fft => fft_product(u, v),
        ProductEngine::Direct => direct_product(u, v),
    };
    // the exact product of real fields is real; drop rounding asymmetry
    if u.reality_defect() == 0.0 && v.reality_defect() == 0.0 {
        Ok(w.real_part())
    } else {
        Ok(w)
    }
}

/// `V . grad u`.
pub fn advect(v: &VectorField2, u: &TorusField) -> Result<TorusField, SpectralError> {
    v.c1.check_same(u)?;
    let a = pointwise_product(&v.c1, &partial(u, 0))?;
    let b = pointwise_product(&v.c2, &partial(u, 1))?;
    Ok(&a + &b)
}

fn fft_product(u: &TorusField, v: &TorusField) -> TorusField {
    let lat = u.lattice();
    let m = lat.collocation_size();
    let mut gu = u.to_grid(m);
    let gv = v.to_grid(m);
    for (a, b) in gu.iter_mut().zip(&gv) {
        *a *= b;
    }
    TorusField::from_grid(lat, &gu, m)
}

fn nonzero(u: &TorusField) -> Vec<([i32; 2], Complex64)> {
    let lat = u.lattice();
    u.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != ZERO)
        .map(|(i, c)| (lat.mode(i), *c))
        .collect()
}

fn direct_product(u: &TorusField, v: &TorusField) -> TorusField {
    let lat: Lattice = u.lattice();
    let nu = nonzero(u);
    let nv = nonzero(v);
    let mut out = vec![ZERO; lat.len()];
    for (p, a) in &nu {
        for (q, b) in &nv {
            if let Some(i) = lat.index([p[0] + q[0], p[1] + q[1]]) {
                out[i] += a * b;
            }
        }
    }
    TorusField::wrap(lat, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cos_squared() {
        for engine in [ProductEngine::Fft, ProductEngine::Direct] {
            let lat = Lattice::new(4).with_engine(engine);
            let c = TorusField::cos_mode(lat, [1, 0], 1.0);
            let p = pointwise_product(&c, &c).unwrap();
            let expect = &TorusField::constant(lat, 0.5) + &TorusField::cos_mode(lat, [2, 0], 0.5);
            assert!((&p - &expect).max_abs_coeff() < 1e-15);
        }
    }

    #[test]
    fn engines_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let lat = Lattice::new(9);
        let u = TorusField::random_smooth(lat, &mut rng, 9, 0.5);
        let v = TorusField::random_smooth(lat, &mut rng, 9, 0.5);
        let a = pointwise_product(&u, &v).unwrap();
        let b = pointwise_product(
            &u.resample(lat.with_engine(ProductEngine::Direct)),
            &v.resample(lat.with_engine(ProductEngine::Direct)),
        )
        .unwrap();
        assert!((&a - &b).max_abs_coeff() < 1e-14);
    }

    #[test]
    fn advect_constant_vanishes() {
        let lat = Lattice::new(5);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let v = VectorField2 {
            c1: TorusField::random_smooth(lat, &mut rng, 5, 1.0),
            c2: TorusField::random_smooth(lat, &mut rng, 5, 1.0),
        };
        let r = advect(&v, &TorusField::constant(lat, 3.0)).unwrap();
        assert_eq!(r.max_abs_coeff(), 0.0);
    }

    #[test]
    fn mismatch_is_an_error() {
        let u = TorusField::zeros(Lattice::new(3));
        let v = TorusField::zeros(Lattice::new(4));
        assert!(matches!(
            pointwise_product(&u, &v),
            Err(SpectralError::LatticeMismatch(3, 4))
        ));
    }
}
