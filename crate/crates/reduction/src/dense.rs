//! Dense complex matrices on `V_N` and the few matrix functions the
//! pipeline needs.

use faer::Mat;
use tk_linearization::ModeSpace;
use tk_spectral::{Complex64, Lattice, TorusField};
use tk_symbols::SymbolGrid;

use crate::ReductionError;

pub type CMat = Mat<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Scalar mode set `0 < |k| <= N` with a position lookup.
#[derive(Clone, Debug)]
pub struct Modes {
    pub space: ModeSpace,
    pos: Vec<Option<usize>>,
}

impl Modes {
    pub fn new(space: ModeSpace) -> Self {
        let lat = space.lattice;
        let mut pos = vec![None; lat.len()];
        for (i, &k) in space.modes.iter().enumerate() {
            pos[lat.index(k).expect("mode in lattice")] = Some(i);
        }
        Self { space, pos }
    }

    pub fn len(&self) -> usize {
        self.space.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.modes.is_empty()
    }

    pub fn mode(&self, i: usize) -> [i32; 2] {
        self.space.modes[i]
    }

    pub fn position(&self, k: [i32; 2]) -> Option<usize> {
        self.space.lattice.index(k).and_then(|i| self.pos[i])
    }

    pub fn lattice(&self) -> Lattice {
        self.space.lattice
    }

    pub fn radius(&self) -> f64 {
        self.space.radius
    }

    /// Largest `|k_i|` over the modes.
    pub fn box_extent(&self) -> usize {
        self.space
            .modes
            .iter()
            .map(|k| k[0].unsigned_abs().max(k[1].unsigned_abs()) as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn restrict(&self, u: &TorusField) -> Vec<Complex64> {
        self.space.modes.iter().map(|&k| u.coeff(k)).collect()
    }

    pub fn embed(&self, v: &[Complex64]) -> TorusField {
        self.embed_into(v, self.lattice())
    }

    pub fn embed_into(&self, v: &[Complex64], lat: Lattice) -> TorusField {
        assert_eq!(v.len(), self.len());
        let mut u = TorusField::zeros(lat);
        for (&k, &c) in self.space.modes.iter().zip(v) {
            u.set_coeff(k, c);
        }
        u
    }

    /// Matrix of `Op(a)` on the modes: `M[k'][xi] = a^(k' - xi, xi)`.
    pub(crate) fn symbol_matrix(&self, a: &SymbolGrid) -> CMat {
        let m = &self.space.modes;
        Mat::from_fn(m.len(), m.len(), |i, j| {
            let (kp, xi) = (m[i], m[j]);
            a.hat([kp[0] - xi[0], kp[1] - xi[1]], xi)
        })
    }

    /// The symbol whose matrix on the modes is `b` (zero elsewhere).
    pub(crate) fn matrix_symbol(&self, b: &CMat, order: f64) -> SymbolGrid {
        let ext = self.box_extent();
        SymbolGrid::from_fn(2 * ext, ext, order, |k, xi| {
            match (self.position(xi), self.position([xi[0] + k[0], xi[1] + k[1]])) {
                (Some(j), Some(i)) => b[(i, j)],
                _ => ZERO,
            }
        })
    }

    pub(crate) fn diag(&self, f: impl Fn([i32; 2]) -> Complex64) -> Vec<Complex64> {
        self.space.modes.iter().map(|&k| f(k)).collect()
    }
}

pub(crate) fn identity(n: usize) -> CMat {
    Mat::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
}

pub(crate) fn diag_mat(d: &[Complex64]) -> CMat {
    Mat::from_fn(d.len(), d.len(), |i, j| if i == j { d[i] } else { ZERO })
}

pub(crate) fn scaled(a: &CMat, c: Complex64) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * c)
}

/// `diag(d) a`.
pub(crate) fn row_scaled(d: &[Complex64], a: &CMat) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| d[i] * a[(i, j)])
}

pub(crate) fn norm_1(a: &CMat) -> f64 {
    (0..a.ncols())
        .map(|j| (0..a.nrows()).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub(crate) fn norm_fro(a: &CMat) -> f64 {
    let mut s = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            s += a[(i, j)].norm_sqr();
        }
    }
    s.sqrt()
}

/// Largest singular value.
pub fn spectral_norm(a: &Mat<Complex64>) -> Result<f64, ReductionError> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Ok(0.0);
    }
    let s = a
        .singular_values()
        .map_err(|e| ReductionError::Dense(format!("{e:?}")))?;
    Ok(s.first().copied().unwrap_or(0.0))
}

pub(crate) fn mat_vec(a: &CMat, x: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(a.ncols(), x.len());
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| a[(i, j)] * x[j]).sum())
        .collect()
}

pub(crate) fn vec_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// `exp(a)` by scaling and squaring of the Taylor series.
pub(crate) fn expm(a: &CMat) -> Result<CMat, ReductionError> {
    let n1 = norm_1(a);
    if !n1.is_finite() || n1 > 1e3 {
        return Err(ReductionError::ExpSeries(n1));
    }
    let squarings = if n1 > 0.5 { (n1 / 0.5).log2().ceil() as i32 } else { 0 };
    let b = scaled(a, Complex64::new(0.5f64.powi(squarings), 0.0));
    let mut term = identity(a.nrows());
    let mut sum = term.clone();
    for j in 1..=40 {
        term = scaled(&(&term * &b), Complex64::new(1.0 / j as f64, 0.0));
        sum = &sum + &term;
        if norm_1(&term) <= 1e-18 * norm_1(&sum) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}

/// `(I + e)^{-1}` by the Neumann series; requires `||e||_2 < 1`.
/// Returns the inverse and the number of terms.
pub(crate) fn neumann_inverse(e: &CMat, tol: f64, max_terms: usize) -> Result<(CMat, usize), ReductionError> {
    let factor = spectral_norm(e)?;
    if factor >= 1.0 {
        return Err(ReductionError::Contraction(factor));
    }
    let n = e.nrows();
    let mut sum = identity(n);
    let mut term = identity(n);
    for j in 1..=max_terms {
        term = scaled(&(e * &term), Complex64::new(-1.0, 0.0));
        sum = &sum + &term;
        if norm_fro(&term) <= tol * norm_fro(&sum) {
            return Ok((sum, j));
        }
    }
    Err(ReductionError::NeumannStall(max_terms))
}

/// Neumann solve of `(I + e) x = b`, given `e` as a closure.
pub(crate) fn neumann_solve(
    e: impl Fn(&[Complex64]) -> Vec<Complex64>,
    b: &[Complex64],
    tol: f64,
    max_terms: usize,
) -> Result<(Vec<Complex64>, usize), ReductionError> {
    let mut sum = b.to_vec();
    let mut term = b.to_vec();
    if vec_norm(b) == 0.0 {
        return Ok((sum, 0));
    }
    for j in 1..=max_terms {
        term = e(&term).into_iter().map(|c| -c).collect();
        for (s, t) in sum.iter_mut().zip(&term) {
            *s += t;
        }
        if vec_norm(&term) <= tol * vec_norm(&sum) {
            return Ok((sum, j));
        }
    }
    Err(ReductionError::NeumannStall(max_terms))
}

/// The four `m x m` blocks of a `2m x 2m` matrix, row-major.
pub(crate) fn split(a: &CMat) -> [CMat; 4] {
    let m = a.nrows() / 2;
    let blk = |r: usize, c: usize| a.as_ref().submatrix(r, c, m, m).to_owned();
    [blk(0, 0), blk(0, m), blk(m, 0), blk(m, m)]
}

pub(crate) fn join(b: &[CMat; 4]) -> CMat {
    let m = b[0].nrows();
    Mat::from_fn(2 * m, 2 * m, |i, j| {
        let q = 2 * (i / m) + j / m;
        b[q][(i % m, j % m)]
    })
}

pub(crate) fn zeros(n: usize) -> CMat {
    Mat::zeros(n, n)
}
