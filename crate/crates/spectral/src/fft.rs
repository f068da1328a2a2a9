use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

type PlanCache = HashMap<(usize, bool), Arc<dyn Fft<f64>>>;

thread_local! {
    static PLANS: RefCell<(FftPlanner<f64>, PlanCache)> =
        RefCell::new((FftPlanner::new(), HashMap::new()));
}

fn plan(m: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANS.with(|p| {
        let mut p = p.borrow_mut();
        if let Some(f) = p.1.get(&(m, inverse)) {
            return f.clone();
        }
        let f = if inverse {
            p.0.plan_fft_inverse(m)
        } else {
            p.0.plan_fft_forward(m)
        };
        p.1.insert((m, inverse), f.clone());
        f
    })
}

/// Unnormalized in-place 2D transform of an `m x m` row-major array.
/// `inverse` uses the `e^{+i}` kernel.
pub(crate) fn fft2(buf: &mut [Complex64], m: usize, inverse: bool) {
    debug_assert_eq!(buf.len(), m * m);
    let f = plan(m, inverse);
    f.process(buf);
    let mut col = vec![Complex64::new(0.0, 0.0); m];
    for j in 0..m {
        for i in 0..m {
            col[i] = buf[i * m + j];
        }
        f.process(&mut col);
        for i in 0..m {
            buf[i * m + j] = col[i];
        }
    }
}
