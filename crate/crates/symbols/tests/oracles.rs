mod common;

use common::random_symbol;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tk_spectral::{
    bracket, dot, norm_sq, partial, pointwise_product, Complex64, Lattice, ProductEngine, StatePair,
    TorusField,
};
use tk_symbols::{
    averaged, chi_lambda, compose_exact, compose_expand, cutoff_chi_lambda, exp_map, multiply,
    parabolic_residual, quantize, quantize_into, solve_parabolic_homological,
    solve_transport_homological, transport_residual, weighted_norm, BlockSymbol, SymbolGrid,
};

const I: Complex64 = Complex64::new(0.0, 1.0);
const OMEGA: [f64; 2] = [1.0, 1.618_033_988_749_895];

fn field(seed: u64, n: usize) -> TorusField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    TorusField::random_smooth(Lattice::new(n).with_engine(ProductEngine::Direct), &mut rng, n, 1.0)
}

#[test]
fn quantization_examples() {
    let u = field(1, 8);
    let one = SymbolGrid::multiplier(8, 0.0, |_| Complex64::new(1.0, 0.0));
    assert_eq!(quantize(&one, &u).unwrap(), u);
    let d1 = SymbolGrid::multiplier(8, 1.0, |xi| I * xi[0] as f64);
    assert!((&quantize(&d1, &u).unwrap() - &partial(&u, 0)).max_abs_coeff() < 1e-15);
    let c = field(2, 8).project_low(3.0);
    let mult = SymbolGrid::multiplication(&c, 8);
    let direct = pointwise_product(&c, &u).unwrap();
    assert!((&quantize(&mult, &u).unwrap() - &direct).max_abs_coeff() < 1e-13);
    let short = SymbolGrid::multiplier(4, 0.0, |_| Complex64::new(1.0, 0.0));
    assert!(quantize(&short, &u).is_err());
}

#[test]
fn norm_examples() {
    for m in [-1.0, 0.5, 2.0] {
        let g = SymbolGrid::multiplier(20, m, |xi| Complex64::new(bracket(xi).powf(m), 0.0));
        for s in [0.0, 5.5, 9.0] {
            assert!((weighted_norm(&g, m, s, 0) - 1.0).abs() < 1e-14);
        }
    }
    let c = field(3, 4);
    let a = SymbolGrid::multiplication(&c, 6);
    for s in [0.0, 2.0, 5.5] {
        for alpha in 0..3 {
            let n = weighted_norm(&a, 0.0, s, alpha);
            assert!((n / c.sobolev_norm(s) - 1.0).abs() < 1e-13);
        }
    }
    assert_eq!(weighted_norm(&SymbolGrid::zeros(3, 5, 1.0), 1.0, 4.0, 2), 0.0);
}

/// `M[k'][xi] = a^(k' - xi, xi)` summed naively over an intermediate range.
fn naive_product_entry(a: &SymbolGrid, b: &SymbolGrid, kp: [i32; 2], xi: [i32; 2], reach: i32) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for e1 in -reach..=reach {
        for e2 in -reach..=reach {
            let eta = [e1, e2];
            acc += a.hat([kp[0] - eta[0], kp[1] - eta[1]], eta) * b.hat([eta[0] - xi[0], eta[1] - xi[1]], xi);
        }
    }
    acc
}

#[test]
fn exact_composition_against_matrix_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let a = random_symbol(&mut rng, 2, 7, 1.0, false);
    let b = random_symbol(&mut rng, 2, 5, 0.0, false);
    let s = compose_exact(&a, &b).unwrap();
    assert_eq!(s.n_x(), 4);
    assert_eq!(s.xi_extent(), 5);
    let mut worst: f64 = 0.0;
    for xi in s.xi_lattice().modes() {
        for k in s.x_lattice().modes() {
            let kp = [k[0] + xi[0], k[1] + xi[1]];
            let expect = naive_product_entry(&a, &b, kp, xi, 12);
            worst = worst.max((s.hat(k, xi) - expect).norm());
        }
    }
    assert!(worst < 1e-11 * a.max_abs() * b.max_abs(), "{worst}");
    assert!(compose_exact(&SymbolGrid::zeros(0, 1, 0.0), &b).is_err());
}

#[test]
fn composition_with_multipliers() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let a = random_symbol(&mut rng, 3, 6, 0.0, false);
    let g = SymbolGrid::multiplier(6, 1.0, |xi| Complex64::new(1.0 + xi[0] as f64, xi[1] as f64));
    let s = compose_exact(&a, &g).unwrap();
    for k in a.x_lattice().modes() {
        for xi in s.xi_lattice().modes() {
            assert!((s.hat(k, xi) - a.hat(k, xi) * g.hat([0, 0], xi)).norm() < 1e-15);
        }
    }
    let h = SymbolGrid::multiplier(8, 2.0, |xi| Complex64::new(norm_sq(xi), 1.0));
    let gh = compose_exact(&h, &g).unwrap();
    for xi in gh.xi_lattice().modes() {
        assert!((gh.hat([0, 0], xi) - h.hat([0, 0], xi) * g.hat([0, 0], xi)).norm() < 1e-13);
    }
}

#[test]
fn expansion_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let a = random_symbol(&mut rng, 2, 6, 0.0, false);
    let b = random_symbol(&mut rng, 2, 6, 0.0, false);
    let (p, _) = compose_expand(&a, &b, 1, 0.0).unwrap();
    let ab = multiply(&a, &b);
    assert!(p.sub(&ab).max_abs() < 1e-15);

    let d1 = SymbolGrid::multiplier(8, 1.0, |xi| I * xi[0] as f64);
    let c = SymbolGrid::multiplication(&field(7, 3), 6);
    let (_, rem) = compose_expand(&d1, &c, 2, 3.0).unwrap();
    let scale = weighted_norm(&compose_exact(&d1, &c).unwrap(), 1.0, 3.0, 0);
    assert!(rem < 1e-14 * scale, "{rem} {scale}");
    let (_, rem1) = compose_expand(&d1, &c, 1, 3.0).unwrap();
    assert!(rem1 > 0.1);
}

#[test]
fn expansion_remainder_decreases() {
    // slowly varying in xi: a = c(x) / (1 + |xi|^2 / 100^2)
    let c = field(8, 2);
    let a = SymbolGrid::from_fn(2, 24, 0.0, |k, xi| c.coeff(k) / (1.0 + norm_sq(xi) / 1e4));
    let b = SymbolGrid::multiplication(&field(9, 1), 12);
    // centered differences sum to exp(sinh d) instead of the shift exp(d), so
    // the remainder floors at O(d^3 a); decrease is asserted up to that floor
    let rems: Vec<f64> = (1..=3).map(|n| compose_expand(&a, &b, n, 2.0).unwrap().1).collect();
    for w in rems.windows(2) {
        assert!(w[1] < w[0], "{rems:?}");
    }
}

#[test]
fn cutoff_examples() {
    let (lam, delta): (f64, f64) = (1e3, 0.06);
    let r = lam.powf(6.0 * delta);
    let chi = cutoff_chi_lambda(lam, delta, 30);
    for xi in chi.xi_lattice().modes() {
        let n = norm_sq(xi).sqrt();
        let v = chi.hat([0, 0], xi).re;
        if n >= r {
            assert_eq!(v, 1.0);
        }
        if n <= r / 2.0 {
            assert_eq!(v, 0.0);
        }
        assert_eq!(v, chi_lambda(lam, delta, [-xi[0], -xi[1]]));
    }
}

#[test]
fn parabolic_single_mode_instance() {
    let (lam, delta) = (1e3, 0.06);
    // a = i xi_1 cos(x_1)
    let a = SymbolGrid::from_fn(1, 20, 1.0, |k, xi| {
        if k == [1, 0] || k == [-1, 0] {
            I * xi[0] as f64 * 0.5
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let psi = solve_parabolic_homological(&a, 1.0, lam, delta, OMEGA).unwrap();
    for xi in psi.xi_lattice().modes() {
        let chi = chi_lambda(lam, delta, xi);
        for (k, sgn) in [([1, 0], 1.0), ([-1, 0], -1.0)] {
            let expect = -chi * (I * xi[0] as f64 / 2.0) / Complex64::new(norm_sq(xi), sgn * lam * OMEGA[0]);
            assert!((psi.hat(k, xi) - expect).norm() < 1e-15);
        }
        assert_eq!(psi.hat([0, 1], xi), Complex64::new(0.0, 0.0));
    }
}

#[test]
fn homological_residuals_on_random_symbols() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for (lam, delta) in [(1e2, 0.06), (1e3, 0.06), (1e4, 0.03)] {
        let a = random_symbol(&mut rng, 3, 16, 1.0, true);
        for sign in [1.0, -1.0] {
            let psi = solve_parabolic_homological(&a, sign, lam, delta, OMEGA).unwrap();
            assert!(parabolic_residual(&psi, &a, sign, lam, delta, OMEGA) <= 1e-13);
        }
        let (f, avg) = solve_transport_homological(&a, lam, OMEGA).unwrap();
        assert!(transport_residual(&f, &a, &avg, lam, OMEGA) <= 1e-13);
    }
    let g = SymbolGrid::multiplier(5, 0.0, |xi| Complex64::new(xi[0] as f64, 1.0));
    let (f, avg) = solve_transport_homological(&g, 1e3, OMEGA).unwrap();
    assert_eq!(f.max_abs(), 0.0);
    assert_eq!(avg, g);
    assert!(solve_transport_homological(&random_symbol(&mut rng, 2, 3, 0.0, false), 1.0, [1.0, 1.0]).is_err());
}

/// Smallest `|w.k| |k|^tau` over the nonzero modes of a band.
fn divisor_gamma(n: i32, tau: f64) -> f64 {
    let mut g = f64::INFINITY;
    for k1 in -n..=n {
        for k2 in -n..=n {
            if (k1, k2) != (0, 0) {
                g = g.min(dot(OMEGA, [k1, k2]).abs() * norm_sq([k1, k2]).sqrt().powf(tau));
            }
        }
    }
    g
}

#[test]
fn transport_solution_bound() {
    // |f^(k, xi)| = |a^(k, xi)| / (lam |w.k|) <= |a^| |k|^tau / (lam gamma)
    let tau = 2.0;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let gamma = divisor_gamma(4, tau);
    for lam in [10.0, 1e3, 1e5] {
        let a = random_symbol(&mut rng, 4, 8, 1.0, true);
        let (f, _) = solve_transport_homological(&a, lam, OMEGA).unwrap();
        for s in [0.0, 3.0] {
            for alpha in 0..2 {
                let lhs = weighted_norm(&f, 1.0, s, alpha);
                let rhs = weighted_norm(&a, 1.0, s + 2.0 * tau + 1.0, alpha) / (lam * gamma);
                assert!(lhs <= rhs, "{lhs} {rhs}");
            }
        }
    }
}

#[test]
fn parabolic_solution_gains_half_derivative() {
    // Frozen from this sweep (60 random symbols, lam in {1e2, 1e3, 1e4}):
    // max of |psi|_{-1/2,s,0} lam^{3 delta} / |a|_{1,s+tau+1,0} is 0.0103.
    const C: f64 = 0.0155;
    let (delta, tau, s) = (0.06, 2.0, 2.0);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst: f64 = 0.0;
    for i in 0..60 {
        let lam = [1e2, 1e3, 1e4][i % 3];
        let a = random_symbol(&mut rng, 3, 24, 1.0, true);
        let psi = solve_parabolic_homological(&a, if i % 2 == 0 { 1.0 } else { -1.0 }, lam, delta, OMEGA).unwrap();
        let ratio = weighted_norm(&psi, -0.5, s, 0) * lam.powf(3.0 * delta) / weighted_norm(&a, 1.0, s + tau + 1.0, 0);
        worst = worst.max(ratio);
    }
    assert!(worst <= C, "{worst}");
}

#[test]
fn exponential_examples() {
    let lat = Lattice::new(6);
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let h = StatePair {
        omega_field: TorusField::random_smooth(lat, &mut rng, 6, 1.0),
        current_field: TorusField::random_smooth(lat, &mut rng, 6, 1.0),
    };
    let zero = exp_map(&BlockSymbol::default(), 0).unwrap();
    assert_eq!(zero.apply(&h).unwrap(), h);

    // scalar multiplier: exp acts as e^{psi(xi)} on each mode
    let g = |xi: [i32; 2]| Complex64::new(0.1 * xi[0] as f64 / bracket(xi), 0.05 * xi[1] as f64 / bracket(xi));
    let psi = BlockSymbol::diagonal(SymbolGrid::multiplier(6, 0.0, g), SymbolGrid::multiplier(6, 0.0, g));
    let e = exp_map(&psi, 30).unwrap();
    let out = e.apply(&h).unwrap();
    let expect = TorusField::from_fn(lat, |k| g(k).exp() * h.omega_field.coeff(k));
    assert!((&out.omega_field - &expect).max_abs_coeff() < 1e-15);

    let strong = BlockSymbol::diagonal(
        SymbolGrid::multiplier(6, 0.0, |_| Complex64::new(40.0, 0.0)),
        SymbolGrid::zeros(0, 6, 0.0),
    );
    assert!(exp_map(&strong, 20).is_err());
}

#[test]
fn exponential_inverse_on_random_small_generators() {
    let lat = Lattice::new(8);
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..5 {
        let up = random_symbol(&mut rng, 2, 8, 0.0, true).scale(Complex64::new(0.02, 0.0));
        let lo = random_symbol(&mut rng, 2, 8, 0.0, true).scale(Complex64::new(0.02, 0.0));
        let e = exp_map(&BlockSymbol::off_diagonal(up, lo), 40).unwrap();
        let h = StatePair {
            omega_field: TorusField::random_smooth(lat, &mut rng, 8, 1.0),
            current_field: TorusField::random_smooth(lat, &mut rng, 8, 1.0),
        };
        let back = e.apply_inverse(&e.apply(&h).unwrap()).unwrap();
        // the truncated product exp(P psi P) exp(-P psi P) is the identity exactly
        assert!(back.sub(&h).sobolev_norm(0.0) < 1e-10 * h.sobolev_norm(0.0));
    }
}

#[test]
fn quantize_into_larger_lattice_keeps_all_modes() {
    let u = field(15, 4);
    let c = SymbolGrid::multiplication(&field(16, 3).project_low(3.0), 4);
    let wide = quantize_into(&c, &u, Lattice::new(7)).unwrap();
    let narrow = quantize(&c, &u).unwrap();
    assert_eq!(wide.resample(u.lattice()), narrow);
    assert!(averaged(&c).n_x() == 0);
}
