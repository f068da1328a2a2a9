use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tk_spectral::{
    advect, biot_savart, bracket, grad, pointwise_product, Lattice, TorusField, VectorField2,
};

const S0: f64 = 5.5;

fn field(seed: u64, n: usize, band: usize, decay: f64) -> TorusField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    TorusField::random_smooth(Lattice::new(n), &mut rng, band, decay)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reality_survives_the_pipeline(seed in any::<u64>(), band in 1usize..8) {
        let u = field(seed, 8, band, 1.0);
        let v = field(seed ^ 0x9e37, 8, band, 1.0);
        let w = biot_savart(&u).unwrap();
        let p = pointwise_product(&u, &v).unwrap();
        let a = advect(&w, &p).unwrap();
        let g = grad(&a);
        prop_assert!(w.reality_defect() <= 1e-14);
        prop_assert!(p.reality_defect() <= 1e-14);
        prop_assert!(a.reality_defect() <= 1e-14);
        prop_assert!(g.reality_defect() <= 1e-14);
    }

    #[test]
    fn interpolation_inequality(seed in any::<u64>(), s1 in 0.0f64..4.0, gap in 0.5f64..6.0, t in 0.0f64..1.0) {
        let u = field(seed, 10, 10, 0.5);
        let s2 = s1 + gap;
        let s = s1 + t * gap;
        let th = (s2 - s) / (s2 - s1);
        let rhs = u.sobolev_norm(s1).powf(th) * u.sobolev_norm(s2).powf(1.0 - th);
        prop_assert!(u.sobolev_norm(s) <= rhs * (1.0 + 1e-12));
    }

    #[test]
    fn projectors_are_orthogonal(seed in any::<u64>(), n in 0.0f64..12.0) {
        let u = field(seed, 8, 8, 0.0);
        let lo = u.project_low(n);
        let hi = u.project_high(n);
        prop_assert_eq!(lo.project_low(n), lo.clone());
        prop_assert_eq!(hi.project_high(n), hi.clone());
        prop_assert_eq!(&lo + &hi, u);
        prop_assert!(lo.inner(&hi).norm() == 0.0);
    }

    #[test]
    fn sharp_smoothing_bounds(seed in any::<u64>(), n in 1usize..8, s in 0.0f64..6.0, a in 0.0f64..4.0) {
        let u = field(seed, 8, 8, 0.0);
        let nn = n as f64;
        // <k> <= <N> on the low modes, <k> > N on the high ones
        let low = u.project_low(nn).sobolev_norm(s + a);
        prop_assert!(low <= bracket([n as i32, 0]).powf(a) * u.sobolev_norm(s) * (1.0 + 1e-12));
        let high = u.project_high(nn).sobolev_norm(s);
        prop_assert!(high <= nn.powf(-a) * u.sobolev_norm(s + a) * (1.0 + 1e-12));
    }

    #[test]
    fn tame_product_estimate(seed in any::<u64>(), decay_u in 0.0f64..3.0, decay_v in 0.0f64..3.0) {
        // C(s) frozen from a 2000-pair calibration sweep (max ratio 0.0064
        // at s = s0 and 0.0224 at s = 9) with 50% headroom.
        for (s, c) in [(S0, 0.0096), (9.0, 0.0337)] {
            let u = field(seed, 8, 4, decay_u);
            let v = field(seed.wrapping_add(1), 8, 4, decay_v);
            let uv = pointwise_product(&u, &v).unwrap();
            let rhs = u.sobolev_norm(s) * v.sobolev_norm(S0) + u.sobolev_norm(S0) * v.sobolev_norm(s);
            prop_assert!(uv.sobolev_norm(s) <= c * rhs, "s={} ratio={}", s, uv.sobolev_norm(s) / rhs);
        }
    }

    #[test]
    fn advection_is_linear_in_the_field(seed in any::<u64>(), t in -3.0f64..3.0) {
        let u = field(seed, 6, 6, 1.0);
        let w = VectorField2::new(field(seed ^ 1, 6, 6, 1.0), field(seed ^ 2, 6, 6, 1.0)).unwrap();
        let a = advect(&w, &u).unwrap().scale(t);
        let b = advect(&w.scale(t), &u).unwrap();
        prop_assert!((&a - &b).max_abs_coeff() <= 1e-13 * (1.0 + a.max_abs_coeff()));
    }
}
