use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tk_diophantine::invert_l_lambda;
use tk_mhd::*;
use tk_spectral::{
    advect, biot_savart, div, laplacian, Complex64, Lattice, ProductEngine, StatePair,
    TorusField, VectorField2,
};

const GOLDEN: [f64; 2] = [1.0, 1.618_033_988_749_895];

fn random_state(seed: u64, lat: Lattice, band: usize) -> StatePair {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    StatePair::new(
        TorusField::random_smooth(lat, &mut rng, band, 2.0),
        TorusField::random_smooth(lat, &mut rng, band, 2.0),
    )
    .unwrap()
}

fn modes(c1: Vec<ModeEntry>, c2: Vec<ModeEntry>) -> ForcingModes {
    ForcingModes { c1, c2 }
}

fn e(k: [i32; 2], re: f64, im: f64) -> ModeEntry {
    ModeEntry { k, re, im }
}

#[test]
fn single_mode_forcing() {
    // f = (0, cos x_1) -> F = d_1 cos x_1 = -sin x_1
    let lat = Lattice::new(4);
    let m = modes(vec![], vec![e([1, 0], 0.5, 0.0), e([-1, 0], 0.5, 0.0)]);
    let spec = build_forcing(lat, &m, [1.0, 0.0]).unwrap();
    let want = TorusField::sin_mode(lat, [1, 0], -1.0);
    assert!((&spec.f_curl - &want).max_abs_coeff() < 1e-16);
    assert_eq!(spec.kbar.map(i32::abs), [1, 0]);
}

#[test]
fn degenerate_forcings_are_rejected() {
    let lat = Lattice::new(4);
    // f = grad sin(x_1 + x_2) = (cos, cos)(x_1 + x_2): curl-free
    let g = vec![e([1, 1], 0.5, 0.0), e([-1, -1], 0.5, 0.0)];
    assert!(matches!(build_forcing(lat, &modes(g.clone(), g), [1.0, 0.3]), Err(MhdError::Degenerate)));
    // F supported on k = (0, j) only, orthogonal to b = (1, 0)
    let f1 = vec![e([0, 2], 0.5, 0.0), e([0, -2], 0.5, 0.0)];
    assert!(matches!(build_forcing(lat, &modes(f1, vec![]), [1.0, 0.0]), Err(MhdError::Degenerate)));
    let mean = vec![e([0, 0], 1.0, 0.0)];
    assert!(matches!(build_forcing(lat, &modes(mean, vec![]), [1.0, 0.0]), Err(MhdError::ForcingMean)));
}

#[test]
fn residual_at_the_origin_is_the_forcing() {
    let lat = Lattice::new(8);
    let p = PhysParams::default();
    let spec = build_forcing(lat, &default_forcing_modes(), p.b_avg).unwrap();
    let r = evaluate_f(&StatePair::zeros(lat), &p, GOLDEN, &spec.f_curl).unwrap();
    let want = spec.f_curl.scale(-forcing_scale(&p));
    assert!((&r.omega_field - &want).max_abs_coeff() < 1e-12);
    assert_eq!(r.current_field.max_abs_coeff(), 0.0);
}

#[test]
fn residual_at_the_approximate_solution() {
    let lat = Lattice::new(12).with_engine(ProductEngine::Direct);
    let p = PhysParams::default();
    let spec = build_forcing(lat, &default_forcing_modes(), p.b_avg).unwrap();
    let om = invert_l_lambda(GOLDEN, p.lam, &spec.f_curl).unwrap().scale(forcing_scale(&p));
    let state = StatePair::new(om.clone(), TorusField::zeros(lat)).unwrap();
    let r = evaluate_f(&state, &p, GOLDEN, &spec.f_curl).unwrap();
    let u = biot_savart(&om).unwrap();
    let want1 = advect(&u, &om).unwrap().scale(p.amp());
    let bgrad = TorusField::from_fn(lat, |k| {
        Complex64::new(0.0, -(p.b_avg[0] * k[0] as f64 + p.b_avg[1] * k[1] as f64)) * om.coeff(k)
    });
    let scale = forcing_scale(&p) * spec.f_curl.max_abs_coeff();
    assert!((&r.omega_field - &want1).max_abs_coeff() < 1e-13 * scale);
    assert!((&r.current_field - &bgrad).max_abs_coeff() < 1e-15 * scale);
}

#[test]
fn residual_preserves_zero_average_and_reality() {
    let lat = Lattice::new(10);
    let p = PhysParams::default();
    let spec = build_forcing(lat, &default_forcing_modes(), p.b_avg).unwrap();
    for seed in 0..10 {
        let s = random_state(seed, lat, 5);
        let r = evaluate_f(&s, &p, GOLDEN, &spec.f_curl).unwrap();
        assert!(r.omega_field.mean().norm() <= 1e-14);
        assert!(r.current_field.mean().norm() <= 1e-14);
        assert!(r.reality_defect() <= 1e-14 * r.sobolev_norm(0.0).max(1.0));
    }
}

#[test]
fn residual_is_exactly_quadratic() {
    let lat = Lattice::new(10).with_engine(ProductEngine::Direct);
    let p = PhysParams::default();
    let spec = build_forcing(lat, &default_forcing_modes(), p.b_avg).unwrap();
    let s = random_state(3, lat, 4);
    let g = |t: f64| evaluate_f(&s.scale(t), &p, GOLDEN, &spec.f_curl).unwrap();
    let (g0, g1, g2) = (g(0.0), g(1.0), g(2.0));
    // G(t) = c + t L + t^2 Q
    let q = g2.sub(&g1.scale(2.0)).add(&g0).scale(0.5);
    let lin = g1.sub(&g0).sub(&q);
    for t in [0.5, 2.0, -1.5] {
        let pred = g0.add(&lin.scale(t)).add(&q.scale(t * t));
        let err = g(t).sub(&pred).sobolev_norm(0.0);
        assert!(err < 1e-12 * g(t).sobolev_norm(0.0), "t={t}: {err:e}");
    }
}

#[test]
fn h_is_bilinear() {
    let lat = Lattice::new(8);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut r = || TorusField::random_smooth(lat, &mut rng, 6, 1.5);
    let u = VectorField2::new(r(), r()).unwrap();
    let b = VectorField2::new(r(), r()).unwrap();
    let base = bilinear_h(&u, &b).unwrap();
    for a in [0.3, -2.0, 7.5] {
        let h = bilinear_h(&u.scale(a), &b).unwrap();
        assert!((&h - &base.scale(a)).max_abs_coeff() < 1e-13 * base.max_abs_coeff() * a.abs());
        let h = bilinear_h(&u, &b.scale(a)).unwrap();
        assert!((&h - &base.scale(a)).max_abs_coeff() < 1e-13 * base.max_abs_coeff() * a.abs());
    }
}

#[test]
fn pressure_of_divergence_free_forcing_vanishes() {
    let lat = Lattice::new(6);
    let z = VectorField2::zeros(lat);
    let f = tk_spectral::perp_grad(&TorusField::cos_mode(lat, [1, 2], 1.0));
    assert_eq!(div(&f).max_abs_coeff(), 0.0);
    let pr = recover_pressure(&z, &z, &f, &PhysParams::default()).unwrap();
    assert_eq!(pr.max_abs_coeff(), 0.0);
}

#[test]
fn pressure_solves_its_poisson_equation() {
    let lat = Lattice::new(12);
    let p = PhysParams::default();
    let spec = build_forcing(lat, &default_forcing_modes(), p.b_avg).unwrap();
    let s = random_state(8, lat, 4);
    let (fields, report) = reconstruct_physical(&s, &spec.f, &p, 9.0).unwrap();
    assert!(report.pressure_residual < 1e-12);
    assert!(report.div_u <= 1e-14 * fields.u.sobolev_norm(0.0).max(1.0));
    assert!(report.div_b <= 1e-14 * fields.b.sobolev_norm(0.0).max(1.0));
    let lap = laplacian(&fields.p);
    let uu = VectorField2::new(advect(&fields.u, &fields.u.c1).unwrap(), advect(&fields.u, &fields.u.c2).unwrap()).unwrap();
    let bb = VectorField2::new(advect(&fields.b, &fields.b.c1).unwrap(), advect(&fields.b, &fields.b.c2).unwrap()).unwrap();
    let rhs = &(&div(&spec.f).scale(p.lam.powf(1.0 + p.eta)) + &div(&bb)) - &div(&uu);
    assert!((&lap - &rhs).max_abs_coeff() <= 1e-12 * rhs.max_abs_coeff());
}

#[test]
fn pressure_from_forcing_scales_like_lam_to_one_plus_eta() {
    let lat = Lattice::new(8);
    let base = PhysParams::default();
    let spec = build_forcing(lat, &default_forcing_modes(), base.b_avg).unwrap();
    let lams = [1e2, 1e3, 1e4];
    let norms: Vec<f64> = lams
        .iter()
        .map(|&l| {
            let p = base.with_lam(l);
            let (_, r) = reconstruct_physical(&StatePair::zeros(lat), &spec.f, &p, 9.0).unwrap();
            assert_eq!(r.u_norm, 0.0);
            assert_eq!(r.b_norm, 0.0);
            r.p_norm.ln()
        })
        .collect();
    let fit = tk_diophantine::linear_fit(&lams.map(f64::ln), &norms);
    assert!((fit.slope - (1.0 + base.eta)).abs() < 1e-12);
}

#[test]
fn velocity_norm_is_equivalent_to_scaled_vorticity_norm() {
    let lat = Lattice::new(12);
    let p = PhysParams::default();
    let spec = build_forcing(lat, &default_forcing_modes(), p.b_avg).unwrap();
    for seed in 0..8 {
        let s = random_state(seed, lat, 12);
        for sv in [0.0, 2.0, 5.5] {
            let (f, _) = reconstruct_physical(&s, &spec.f, &p, sv).unwrap();
            let ratio = f.u.sobolev_norm(sv + 1.0) / (p.amp() * s.omega_field.sobolev_norm(sv));
            // |BS(k)| = 1/|k| and <k>/|k| lies in (1, sqrt 2]
            assert!((1.0..=2f64.sqrt() + 1e-12).contains(&ratio), "{ratio}");
        }
    }
}

#[test]
fn parameter_validation() {
    assert!(PhysParams::new(0.5, 0.02, [1.0, 0.0]).is_err());
    assert!(PhysParams::new(10.0, 1.2, [1.0, 0.0]).is_err());
    assert!(PhysParams::new(10.0, 0.02, [0.0, 0.0]).is_err());
    let p = PhysParams::new(10.0, 0.02, [1.0, 0.0]).unwrap();
    assert_eq!(p.delta, 3.0 * 0.02);
    assert!(PhysParams::default().validate().is_ok());
    // the desk parameters sit outside the asymptotic delta regime
    assert!(!PhysParams::default().in_asymptotic_regime(42, 2.0));
    assert!((PhysParams::delta_bound(42, 2.0) - 1.0 / 172.0).abs() < 1e-18);
}
