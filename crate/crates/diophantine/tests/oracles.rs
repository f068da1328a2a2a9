use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tk_diophantine::*;
use tk_spectral::{bracket, Complex64, Lattice, TorusField};

const GOLDEN: [f64; 2] = [1.0, 1.618_033_988_749_895];

#[test]
fn frozen_divisor_minima() {
    // 30-digit brute force over the disk |k| <= 100
    let p = DioParams::new(0.01, 2.0, 100).unwrap();
    let c = is_diophantine(GOLDEN, &p);
    assert!(c.ok);
    assert!((c.min_divisor - 100.0).abs() < 1e-12);
    assert_eq!(c.argmin.map(i32::abs), [1, 0]);

    let p1 = DioParams { gamma: 1.0, tau: 2.0, k_check: 100 };
    let c = is_diophantine([1.0, 2f64.sqrt()], &p1);
    assert!((c.min_divisor - 0.828_427_124_746_190_1).abs() < 1e-13);
    assert_eq!(c.argmin.map(i32::abs), [1, 1]);
    let c = is_diophantine([1.2345, 1.8765], &p1);
    assert!((c.min_divisor - 0.6435).abs() < 1e-12);
    assert_eq!(c.argmin.map(i32::abs), [3, 2]);
}

#[test]
fn resonant_frequency_is_rejected() {
    for g in [0.5, 0.01, 1e-6] {
        let p = DioParams::new(g, 2.0, 50).unwrap();
        assert!(!is_diophantine([1.0, 1.0], &p).ok);
    }
}

#[test]
fn parameter_validation() {
    assert!(DioParams::new(1.5, 2.0, 10).is_err());
    assert!(DioParams::new(0.1, 0.0, 10).is_err());
    assert!(DioParams::new(0.1, 2.0, 0).is_err());
}

fn random_field(seed: u64, n: usize) -> TorusField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    TorusField::random_smooth(Lattice::new(n), &mut rng, n, 1.0)
}

#[test]
fn directional_inverse_roundtrip_and_bound() {
    let p = DioParams { gamma: 1.0, tau: 2.0, k_check: 64 };
    assert!(is_diophantine(GOLDEN, &p).ok);
    for seed in 0..20 {
        let u = random_field(seed, 32);
        for lam in [10.0, 1e3] {
            let v = invert_directional(GOLDEN, lam, &u).unwrap();
            assert!(v.is_zero_average());
            let back = apply_directional(GOLDEN, lam, &v);
            let rel = (&back - &u).max_abs_coeff() / u.max_abs_coeff();
            assert!(rel < 1e-12, "{rel:e}");
            // |lam omega.k| >= lam gamma |k|^{-tau} gives the bound with C = 1
            for s in [0.0, 2.0, 5.5] {
                assert!(v.sobolev_norm(s) <= u.sobolev_norm(s + p.tau) / (p.gamma * lam));
            }
        }
    }
}

#[test]
fn heat_inverse_single_mode_and_roundtrip() {
    let lat = Lattice::new(32);
    let lam = 1e3;
    let c = TorusField::cos_mode(lat, [1, 0], 1.0);
    let h = invert_l_lambda(GOLDEN, lam, &c).unwrap();
    let e = Complex64::new(0.5, 0.0) / Complex64::new(1.0, lam);
    assert!((h.coeff([1, 0]) - e).norm() < 1e-18);
    assert!(h.reality_defect() == 0.0);
    let u = random_field(5, 32);
    let back = apply_l_lambda(GOLDEN, lam, &invert_l_lambda(GOLDEN, lam, &u).unwrap());
    assert!((&back - &u).max_abs_coeff() / u.max_abs_coeff() < 1e-13);
}

#[test]
fn heat_eigenvalue_dominates_both_regimes() {
    let lam = 1e3;
    let lat = Lattice::new(40);
    for k in lat.modes().filter(|k| *k != [0, 0]) {
        let ev = heat_eigenvalue(k, GOLDEN, lam).norm();
        let k2 = (k[0] * k[0] + k[1] * k[1]) as f64;
        let tr = lam * (GOLDEN[0] * k[0] as f64 + GOLDEN[1] * k[1] as f64).abs();
        assert!(ev >= k2.max(tr));
    }
}

#[test]
fn gain_bound_over_lambda_grid() {
    // omega is in DC(1, 2) on the checked disk
    let p = DioParams { gamma: 1.0, tau: 2.0, k_check: 200 };
    assert!(is_diophantine(GOLDEN, &p).ok);
    let expo = 1.0 / (p.tau + 2.0) - 0.01;
    let lams = [10.0, 1e2, 1e3, 1e4];
    let sups: Vec<f64> = lams.iter().map(|&l| gain_sup(GOLDEN, l, 200)).collect();
    for (l, s) in lams.iter().zip(&sups) {
        assert!(*s <= 3.0 / p.gamma * l.powf(-expo), "lam {l}: {s}");
        // tail beyond the disk is below <r>/r^2
        assert!(bracket([200, 0]) / 4e4 < *s);
    }
    let fit = linear_fit(
        &lams.map(f64::ln),
        &sups.iter().map(|s| s.ln()).collect::<Vec<_>>(),
    );
    assert!(fit.slope <= -expo + 0.05, "slope {}", fit.slope);
}

#[test]
fn loss_bound_over_lambda_grid() {
    let gamma = 1.0;
    for lam in [10.0, 1e2, 1e3, 1e4] {
        assert!(loss_sup(GOLDEN, lam, 2.0, 200) <= 1.0 / (gamma * lam) * (1.0 + 1e-12));
    }
}

#[test]
fn melnikov_with_zero_corrections_is_diophantine() {
    let p = DioParams::new(0.05, 2.0, 100).unwrap();
    for w in [GOLDEN, [1.3, 1.9], [1.0, 1.0]] {
        assert_eq!(melnikov_ok(w, 1e3, &p, &ZTable::new()), is_diophantine(w, &p).ok);
    }
}

#[test]
fn small_corrections_keep_membership() {
    // omega in DC(2 gamma) and |z(k)| <= lam gamma / (2 |k|^tau)
    let p2 = DioParams { gamma: 0.5, tau: 2.0, k_check: 60 };
    assert!(is_diophantine(GOLDEN, &p2).ok);
    let p = p2.with_gamma(0.25);
    let lam = 1e3;
    let mut z = ZTable::new();
    for k in Lattice::new(10).modes().filter(|k| *k != [0, 0]) {
        let k2 = (k[0] * k[0] + k[1] * k[1]) as f64;
        let mag = lam * p.gamma / (2.0 * k2);
        z.insert(k, Complex64::from_polar(mag, 0.37 * k[0] as f64 - 1.1 * k[1] as f64));
    }
    assert!(melnikov_ok(GOLDEN, lam, &p, &z));
}

#[test]
fn diophantine_failure_measure_scales_linearly() {
    let region = Region::unit_shifted();
    let gammas = [0.1, 0.05, 0.025, 0.0125];
    let est: Vec<f64> = gammas
        .iter()
        .map(|&g| {
            let p = DioParams::new(g, 2.0, 200).unwrap();
            measure_estimate(|w| is_diophantine(w, &p).ok, region, 100_000, 17).estimate
        })
        .collect();
    let fit = linear_fit(&gammas.map(f64::ln), &est.iter().map(|e| e.ln()).collect::<Vec<_>>());
    assert!((fit.slope - 1.0).abs() <= 0.2, "slope {}", fit.slope);
}

fn strip(k: [i32; 2], gamma: f64) -> MeasureEstimate {
    let k2 = (k[0] * k[0] + k[1] * k[1]) as f64;
    let width = gamma / k2;
    measure_estimate(
        move |w| (w[0] * k[0] as f64 + w[1] * k[1] as f64).abs() >= width,
        Region::unit_shifted(),
        1_000_000,
        23,
    )
}

#[test]
fn resonant_strips_shrink_like_inverse_cube() {
    let gamma = 0.1;
    // |k| = 1 strips miss [1,2]^2; the constant comes from k = (1,-1),
    // whose exact strip area is gamma - gamma^2/4
    let c0 = strip([1, -1], gamma).estimate * 2f64.sqrt().powi(3) / gamma;
    let exact = (gamma - gamma * gamma / 4.0) * 2f64.sqrt().powi(3) / gamma;
    assert!((c0 - exact).abs() < 0.05 * exact, "{c0} vs {exact}");
    assert_eq!(strip([1, 0], gamma).estimate, 0.0);
    assert_eq!(strip([0, 1], gamma).estimate, 0.0);
    for k in [[2, -1], [3, -2], [2, -2], [4, -3], [5, -4], [5, -5], [7, -5], [7, -7]] {
        let r = ((k[0] * k[0] + k[1] * k[1]) as f64).sqrt();
        let m = strip(k, gamma).estimate;
        assert!(m <= 1.5 * c0 * gamma / r.powi(3), "{k:?}: {m}");
    }
}

#[test]
fn frequency_draws_are_reproducible() {
    let p = DioParams::new(0.05, 2.0, 100).unwrap();
    let a = draw_diophantine(Region::unit_shifted(), &p, 3, 100).unwrap();
    assert_eq!(Some(a), draw_diophantine(Region::unit_shifted(), &p, 3, 100));
    assert!(is_diophantine(a, &p).ok);
}
