//! Straightening of `w.grad + a_lam.grad` by the change of variables
//! `x -> x + alpha(x)`.

use faer::Mat;
use tk_diophantine::{invert_directional, linear_fit};
use tk_spectral::{advect, dot, norm, partial, Complex64, Lattice, TorusField, VectorField2};

use crate::dense::{identity, neumann_inverse, spectral_norm, CMat, Modes};
use crate::{ReductionConfig, ReductionError, Stage, StageExt};

const MAX_FIXED_POINT: usize = 100;
const INCREMENT_TOL: f64 = 1e-12;
const NEWTON_TOL: f64 = 1e-15;

#[derive(Clone, Debug)]
pub struct Straightening {
    /// `alpha` with `(w + a_lam).grad alpha = -a_lam`.
    pub alpha: VectorField2,
    /// `y -> y + alpha_inv(y)` inverts `x -> x + alpha(x)`.
    pub alpha_inv: VectorField2,
    pub iterations: usize,
    /// Last fixed-point increment (max coefficient).
    pub increment: f64,
    /// `sup |grad alpha|` (pointwise operator norm).
    pub fold: f64,
    /// `sup |(x + alpha) o (y + alpha_inv) - y|` off the construction grid.
    pub inverse_defect: f64,
    /// Pointwise defect of `A^{-1} (w + a_lam).grad A = w.grad` on test fields.
    pub conjugation_residual: f64,
    /// `Pi_N A Pi_N` with `A u = u(x + alpha(x))`.
    pub a_mat: CMat,
    /// Exact inverse of `a_mat`.
    pub a_inv_mat: CMat,
    /// `||Pi_N A Pi_N Pi_N A^{-1} Pi_N - I||_2`.
    pub truncation_defect: f64,
    /// `P_0 = a_inv_mat P a_mat`.
    pub conjugated: CMat,
    /// Log-log slope in `|xi|` of `||(P - lam w.grad) e_xi||`, before and
    /// after the conjugation; `None` when that part vanishes.
    pub principal_slope_before: Option<f64>,
    pub principal_slope_after: Option<f64>,
}

fn comp(v: &VectorField2, i: usize) -> &TorusField {
    v.component(i)
}

/// Fixed point `alpha_{j+1} = -(w.grad)^{-1} [a_lam + a_lam.grad alpha_j]`.
fn solve_alpha(a_lam: &VectorField2, omega: [f64; 2]) -> Result<(VectorField2, usize, f64), ReductionError> {
    let lat = a_lam.lattice();
    let mut alpha = VectorField2::zeros(lat);
    let mut last = f64::INFINITY;
    for it in 1..=MAX_FIXED_POINT {
        let step = |i: usize| -> Result<TorusField, ReductionError> {
            let rhs = comp(a_lam, i) + &advect(a_lam, comp(&alpha, i))?;
            Ok(invert_directional(omega, 1.0, &rhs.zero_mean_project())
                .map_err(|e| match e {
                    tk_diophantine::DioError::Resonance(k) => ReductionError::Resonance(k),
                    e => ReductionError::Param(e.to_string()),
                })?
                .scale(-1.0)
                .real_part())
        };
        let next = VectorField2 {
            c1: step(0)?,
            c2: step(1)?,
        };
        let inc = (&next.c1 - &alpha.c1)
            .max_abs_coeff()
            .max((&next.c2 - &alpha.c2).max_abs_coeff());
        alpha = next;
        let scale = alpha.c1.max_abs_coeff().max(alpha.c2.max_abs_coeff()).max(1e-300);
        if inc <= INCREMENT_TOL * scale || inc == 0.0 {
            return Ok((alpha, it, inc));
        }
        if it > 2 && inc > last {
            return Err(ReductionError::FixedPoint(inc));
        }
        last = inc;
    }
    Err(ReductionError::FixedPoint(last))
}

/// Pointwise `alpha` and `grad alpha` evaluator.
struct Diffeo {
    f: [TorusField; 2],
    g: [[TorusField; 2]; 2],
}

impl Diffeo {
    fn new(alpha: &VectorField2) -> Self {
        let d = |i: usize, j: usize| partial(comp(alpha, i), j);
        Self {
            f: [alpha.c1.clone(), alpha.c2.clone()],
            g: [[d(0, 0), d(0, 1)], [d(1, 0), d(1, 1)]],
        }
    }

    /// `alpha(x)` and `J(x)[i][j] = d_j alpha_i(x)` at the points.
    fn eval(&self, pts: &[[f64; 2]]) -> (Vec<[f64; 2]>, Vec<[[f64; 2]; 2]>) {
        let f0 = self.f[0].eval_at(pts);
        let f1 = self.f[1].eval_at(pts);
        let g: Vec<Vec<Complex64>> = [(0, 0), (0, 1), (1, 0), (1, 1)]
            .iter()
            .map(|&(i, j)| self.g[i][j].eval_at(pts))
            .collect();
        let vals = (0..pts.len()).map(|p| [f0[p].re, f1[p].re]).collect();
        let jac = (0..pts.len())
            .map(|p| [[g[0][p].re, g[1][p].re], [g[2][p].re, g[3][p].re]])
            .collect();
        (vals, jac)
    }
}

fn grid_points(m: usize, shift: f64) -> Vec<[f64; 2]> {
    let h = std::f64::consts::TAU / m as f64;
    let mut pts = Vec::with_capacity(m * m);
    for a in 0..m {
        for b in 0..m {
            pts.push([(a as f64 + shift) * h, (b as f64 + shift) * h]);
        }
    }
    pts
}

fn op_norm_2x2(j: &[[f64; 2]; 2]) -> f64 {
    // largest singular value of a real 2x2 matrix
    let (a, b, c, d) = (j[0][0], j[0][1], j[1][0], j[1][1]);
    let s = a * a + b * b + c * c + d * d;
    let det = a * d - b * c;
    ((s + (s * s - 4.0 * det * det).max(0.0).sqrt()) / 2.0).sqrt()
}

/// Newton inversion of `x + alpha(x) = y` at each grid point.
fn invert_diffeo(dif: &Diffeo, lat: Lattice) -> Result<VectorField2, ReductionError> {
    let m = lat.side();
    let ys = grid_points(m, 0.0);
    let (a0, _) = dif.eval(&ys);
    let mut xs: Vec<[f64; 2]> = ys.iter().zip(&a0).map(|(y, a)| [y[0] - a[0], y[1] - a[1]]).collect();
    for _ in 0..50 {
        let (av, jac) = dif.eval(&xs);
        let mut worst: f64 = 0.0;
        for p in 0..xs.len() {
            let r = [xs[p][0] + av[p][0] - ys[p][0], xs[p][1] + av[p][1] - ys[p][1]];
            let j = jac[p];
            let (a, b, c, d) = (1.0 + j[0][0], j[0][1], j[1][0], 1.0 + j[1][1]);
            let det = a * d - b * c;
            xs[p][0] -= (d * r[0] - b * r[1]) / det;
            xs[p][1] -= (-c * r[0] + a * r[1]) / det;
            worst = worst.max(r[0].abs().max(r[1].abs()));
        }
        if worst <= NEWTON_TOL {
            break;
        }
    }
    let vals = |i: usize| -> Vec<Complex64> {
        xs.iter().zip(&ys).map(|(x, y)| Complex64::new(x[i] - y[i], 0.0)).collect()
    };
    Ok(VectorField2 {
        c1: TorusField::from_grid(lat, &vals(0), m).real_part(),
        c2: TorusField::from_grid(lat, &vals(1), m).real_part(),
    })
}

fn inverse_defect(dif: &Diffeo, alpha_inv: &VectorField2) -> f64 {
    let ys = grid_points(2 * alpha_inv.lattice().side(), 0.5);
    let b0 = alpha_inv.c1.eval_at(&ys);
    let b1 = alpha_inv.c2.eval_at(&ys);
    let xs: Vec<[f64; 2]> = (0..ys.len()).map(|p| [ys[p][0] + b0[p].re, ys[p][1] + b1[p].re]).collect();
    let (av, _) = dif.eval(&xs);
    (0..ys.len())
        .map(|p| {
            (xs[p][0] + av[p][0] - ys[p][0])
                .abs()
                .max((xs[p][1] + av[p][1] - ys[p][1]).abs())
        })
        .fold(0.0, f64::max)
}

/// `Pi_N (u o (x + shift(x))) Pi_N` by synthesis at displaced grid points.
fn composition_matrix(modes: &Modes, shift: &VectorField2) -> CMat {
    let ext = modes.box_extent();
    let band = shift.c1.band().max(shift.c2.band());
    let mc = (4 * (ext + band) + 1).max(2 * shift.lattice().n_max() + 2);
    let s0 = shift.c1.to_grid(mc);
    let s1 = shift.c2.to_grid(mc);
    let pts = grid_points(mc, 0.0);
    let out = Lattice::new(ext);
    let n = modes.len();
    let cols: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let xi = modes.mode(j);
            let vals: Vec<Complex64> = pts
                .iter()
                .enumerate()
                .map(|(p, x)| {
                    let y0 = x[0] + s0[p].re;
                    let y1 = x[1] + s1[p].re;
                    Complex64::cis(xi[0] as f64 * y0 + xi[1] as f64 * y1)
                })
                .collect();
            let f = TorusField::from_grid(out, &vals, mc);
            (0..n).map(|i| f.coeff(modes.mode(i))).collect()
        })
        .collect();
    Mat::from_fn(n, n, |i, j| cols[j][i])
}

/// Deterministic smooth test field on a few low modes.
fn test_field(lat: Lattice, seed: u32) -> TorusField {
    TorusField::from_fn(lat, |k| {
        let r2 = (k[0] * k[0] + k[1] * k[1]) as f64;
        if r2 == 0.0 || r2 > 9.0 {
            return Complex64::new(0.0, 0.0);
        }
        let h = (k[0] * 37 + k[1] * 101 + seed as i32 * 53) as f64;
        Complex64::from_polar(1.0 / (1.0 + r2), h.sin() * 3.0)
    })
    .real_part()
}

fn conjugation_residual(
    dif: &Diffeo,
    a_lam: &VectorField2,
    alpha_inv: &VectorField2,
    omega: [f64; 2],
) -> f64 {
    let lat = a_lam.lattice();
    let ys = grid_points(lat.side(), 0.25);
    let b0 = alpha_inv.c1.eval_at(&ys);
    let b1 = alpha_inv.c2.eval_at(&ys);
    let xs: Vec<[f64; 2]> = (0..ys.len()).map(|p| [ys[p][0] + b0[p].re, ys[p][1] + b1[p].re]).collect();
    let (_, jac) = dif.eval(&xs);
    let a0 = a_lam.c1.eval_at(&xs);
    let a1 = a_lam.c2.eval_at(&xs);
    let mut worst: f64 = 0.0;
    for seed in 0..3 {
        let u = test_field(lat, seed);
        let du0 = partial(&u, 0).eval_at(&ys);
        let du1 = partial(&u, 1).eval_at(&ys);
        let mut num: f64 = 0.0;
        let mut den: f64 = 0.0;
        for p in 0..ys.len() {
            let v = [omega[0] + a0[p].re, omega[1] + a1[p].re];
            let j = jac[p];
            // c_j = v_j + sum_i v_i d_i alpha_j
            let c0 = v[0] + v[0] * j[0][0] + v[1] * j[0][1];
            let c1 = v[1] + v[0] * j[1][0] + v[1] * j[1][1];
            num = num.max(((c0 - omega[0]) * du0[p].re + (c1 - omega[1]) * du1[p].re).abs());
            den = den.max((omega[0] * du0[p].re + omega[1] * du1[p].re).abs());
        }
        worst = worst.max(num / den);
    }
    worst
}

fn principal_slope(p: &CMat, modes: &Modes, lam: f64, omega: [f64; 2]) -> Option<f64> {
    let n = modes.len();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for j in 0..n {
        let k = modes.mode(j);
        if norm(k) < 2.0 {
            continue;
        }
        let mut s = 0.0;
        for i in 0..n {
            let mut c = p[(i, j)];
            if i == j {
                c -= Complex64::new(0.0, lam * dot(omega, k));
            }
            s += c.norm_sqr();
        }
        if s > 0.0 {
            xs.push(norm(k).ln());
            ys.push(0.5 * s.ln());
        }
    }
    (xs.len() >= 2 && xs.len() * 2 >= n).then(|| linear_fit(&xs, &ys).slope)
}

/// Straightens the transport operator `p` (the matrix of `P` on the modes)
/// whose principal part is `lam w.grad + a.grad`.
pub fn straighten_transport(
    p: &CMat,
    modes: &Modes,
    a_field: &VectorField2,
    lam: f64,
    omega: [f64; 2],
    cfg: &ReductionConfig,
) -> Result<Straightening, ReductionError> {
    let a_lam = a_field.scale(1.0 / lam);
    let (alpha, iterations, increment) = solve_alpha(&a_lam, omega).at(Stage::Straighten)?;
    let dif = Diffeo::new(&alpha);
    let (_, jac) = dif.eval(&grid_points(alpha.lattice().collocation_size(), 0.0));
    let fold = jac.iter().map(op_norm_2x2).fold(0.0, f64::max);
    if fold >= 1.0 {
        return Err(ReductionError::Fold(fold)).at(Stage::Straighten);
    }
    let alpha_inv = invert_diffeo(&dif, alpha.lattice()).at(Stage::Straighten)?;
    let inverse_defect = inverse_defect(&dif, &alpha_inv);
    let conjugation_residual = conjugation_residual(&dif, &a_lam, &alpha_inv, omega);

    let a_mat = composition_matrix(modes, &alpha);
    let x_mat = composition_matrix(modes, &alpha_inv);
    let e = &(&a_mat * &x_mat) - &identity(modes.len());
    let truncation_defect = spectral_norm(&e).at(Stage::Straighten)?;
    let (s, _) = neumann_inverse(&e, cfg.neumann_tol, cfg.max_neumann_terms).at(Stage::Straighten)?;
    let a_inv_mat = &x_mat * &s;
    let conjugated = &(&a_inv_mat * p) * &a_mat;
    Ok(Straightening {
        principal_slope_before: principal_slope(p, modes, lam, omega),
        principal_slope_after: principal_slope(&conjugated, modes, lam, omega),
        alpha,
        alpha_inv,
        iterations,
        increment,
        fold,
        inverse_defect,
        conjugation_residual,
        a_mat,
        a_inv_mat,
        truncation_defect,
        conjugated,
    })
}

impl Straightening {
    /// The trivial straightening (`alpha = 0`).
    pub fn identity(p: &CMat, modes: &Modes, lat: Lattice) -> Self {
        let n = modes.len();
        Self {
            alpha: VectorField2::zeros(lat),
            alpha_inv: VectorField2::zeros(lat),
            iterations: 0,
            increment: 0.0,
            fold: 0.0,
            inverse_defect: 0.0,
            conjugation_residual: 0.0,
            a_mat: identity(n),
            a_inv_mat: identity(n),
            truncation_defect: 0.0,
            conjugated: p.clone(),
            principal_slope_before: None,
            principal_slope_after: None,
        }
    }
}
