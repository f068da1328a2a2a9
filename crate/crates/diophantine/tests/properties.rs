use proptest::prelude::*;
use tk_diophantine::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fast_scan_is_exhaustive(w1 in 0.5f64..2.5, w2 in -2.5f64..2.5, g in 0.001f64..0.9, k in 5usize..40) {
        prop_assume!(w2.abs() > 1e-3);
        let p = DioParams::new(g, 2.0, k).unwrap();
        let a = is_diophantine([w1, w2], &p);
        let b = min_divisor_brute([w1, w2], &p);
        prop_assert_eq!(a.min_divisor, b.min_divisor);
        prop_assert_eq!(a.ok, b.ok);
    }

    #[test]
    fn membership_is_monotone_in_gamma(w1 in 1.0f64..2.0, w2 in 1.0f64..2.0, g in 0.002f64..0.9) {
        let p = DioParams::new(g, 2.0, 80).unwrap();
        if is_diophantine([w1, w2], &p).ok {
            prop_assert!(is_diophantine([w1, w2], &p.with_gamma(g / 2.0)).ok);
        }
    }

    #[test]
    fn melnikov_sets_are_nested(w1 in 1.0f64..2.0, w2 in 1.0f64..2.0, g in 0.002f64..0.45, zr in -50.0f64..50.0) {
        let mut z = ZTable::new();
        z.insert([1, -1], tk_spectral::Complex64::new(zr, 0.3 * zr));
        z.insert([2, 3], tk_spectral::Complex64::new(-zr, 1.0));
        let p = DioParams::new(g, 2.0, 60).unwrap();
        if melnikov_ok([w1, w2], 1e3, &p.with_gamma(2.0 * g), &z) {
            prop_assert!(melnikov_ok([w1, w2], 1e3, &p, &z));
        }
    }
}
