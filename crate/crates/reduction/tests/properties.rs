mod common;

use common::*;
use proptest::prelude::*;
use tk_linearization::{galerkin_matrix, galerkin_solve};
use tk_reduction::*;
use tk_spectral::{StatePair, DEFAULT_S0};

fn small_config() -> ReductionConfig {
    config().with_truncation(5.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn chain_inverts_truncated_operator(seed in 0u64..1000, amp in 0.0f64..0.05) {
        let p = params();
        let lat = lattice(12);
        let st = nontrivial_state(lat, &p, omega(), seed, amp);
        let op = operator(&st, &p, omega());
        let rhs = random_rhs(lat, 5.0, seed + 1);
        let (h, report) = invert_linearized_paper_path(&op, &rhs, &small_config()).unwrap();
        let gm = galerkin_matrix(&op, 5.0).unwrap();
        let reference = galerkin_solve(&gm, &rhs).unwrap();
        prop_assert!(rel_diff(&h, &reference, DEFAULT_S0) <= 1e-8);
        prop_assert!(report.end_to_end_residual.unwrap() <= 1e-10);
        prop_assert!(report.z_table.iter().all(|e| e.re.is_finite() && e.im.is_finite()));
    }

    #[test]
    fn chain_is_linear(seed in 0u64..1000, c in -3.0f64..3.0) {
        let p = params();
        let lat = lattice(12);
        let op = operator(&nontrivial_state(lat, &p, omega(), seed, 0.03), &p, omega());
        let path = PaperPath::build(&op, &small_config()).unwrap();
        let (a, b) = (random_rhs(lat, 5.0, seed), random_rhs(lat, 5.0, seed + 7));
        let combo = a.add(&b.scale(c));
        let lhs = path.solve(&combo).unwrap();
        let rhs: StatePair = path.solve(&a).unwrap().add(&path.solve(&b).unwrap().scale(c));
        prop_assert!(rel_diff(&lhs, &rhs, DEFAULT_S0) <= 1e-10);
    }

    #[test]
    fn conjugator_inverse_is_exact(seed in 0u64..1000, amp in 0.0f64..0.05) {
        let p = params();
        let lat = lattice(12);
        let op = operator(&nontrivial_state(lat, &p, omega(), seed, amp), &p, omega());
        let d = decouple(&op, &small_config()).unwrap();
        prop_assert!(d.conjugator_defect() <= 1e-10);
        let h = random_rhs(lat, 5.0, seed);
        let back = d.apply_conjugator_inv(&d.apply_conjugator(&h));
        prop_assert!(rel_diff(&back, &h, DEFAULT_S0) <= 1e-10);
    }
}
