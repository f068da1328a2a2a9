//! Dense Galerkin oracle: the matrix of `Pi_N L Pi_N` on the modes
//! `0 < |k| <= N` of both components, LU-factored with `faer`.

use std::io::{Read, Write};

use faer::linalg::solvers::{PartialPivLu, Solve};
use faer::{Col, Mat};
use rayon::prelude::*;
use tk_spectral::{norm_sq, Complex64, Lattice, StatePair, TorusField};

use crate::{LinError, LinearizedOperator};

/// Condition estimates above this are reported as singular.
pub const COND_LIMIT: f64 = 1e12;

const MAGIC: &[u8; 4] = b"TKGM";
const VERSION: u32 = 1;
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Modes `0 < |k| <= radius` of a lattice, in lattice order. Vectors in
/// this space stack the vorticity block over the current block.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeSpace {
    pub lattice: Lattice,
    pub radius: f64,
    pub modes: Vec<[i32; 2]>,
}

impl ModeSpace {
    pub fn new(lattice: Lattice, radius: f64) -> Result<Self, LinError> {
        if !(radius > 0.0) {
            return Err(LinError::Truncation(radius));
        }
        let r2 = radius * radius;
        let modes = lattice
            .modes()
            .filter(|&k| {
                let q = norm_sq(k);
                q > 0.0 && q <= r2
            })
            .collect();
        Ok(Self { lattice, radius, modes })
    }

    pub fn dim(&self) -> usize {
        2 * self.modes.len()
    }

    pub fn restrict(&self, h: &StatePair) -> Vec<Complex64> {
        let m = &self.modes;
        m.iter()
            .map(|&k| h.omega_field.coeff(k))
            .chain(m.iter().map(|&k| h.current_field.coeff(k)))
            .collect()
    }

    pub fn embed(&self, v: &[Complex64]) -> StatePair {
        assert_eq!(v.len(), self.dim());
        let half = self.modes.len();
        let mut om = TorusField::zeros(self.lattice);
        let mut j = TorusField::zeros(self.lattice);
        for (i, &k) in self.modes.iter().enumerate() {
            om.set_coeff(k, v[i]);
            j.set_coeff(k, v[half + i]);
        }
        StatePair {
            omega_field: om,
            current_field: j,
        }
    }

    fn basis(&self, col: usize) -> StatePair {
        let mut v = vec![ZERO; self.dim()];
        v[col] = Complex64::new(1.0, 0.0);
        self.embed(&v)
    }
}

#[derive(Clone, Debug)]
pub struct GalerkinMatrix {
    pub space: ModeSpace,
    pub mat: Mat<Complex64>,
}

/// Assembles `Pi_N L Pi_N` column by column.
pub fn galerkin_matrix(op: &LinearizedOperator, radius: f64) -> Result<GalerkinMatrix, LinError> {
    let space = ModeSpace::new(op.lattice(), radius)?;
    let dim = space.dim();
    let cols = (0..dim)
        .into_par_iter()
        .map(|c| op.apply(&space.basis(c)).map(|r| space.restrict(&r)))
        .collect::<Result<Vec<_>, _>>()?;
    let mat = Mat::from_fn(dim, dim, |i, j| cols[j][i]);
    Ok(GalerkinMatrix { space, mat })
}

impl GalerkinMatrix {
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn apply(&self, h: &StatePair) -> StatePair {
        let x = self.space.restrict(h);
        let y: Vec<Complex64> = (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.mat[(i, j)] * x[j]).sum())
            .collect();
        self.space.embed(&y)
    }

    fn norm_l1(&self) -> f64 {
        (0..self.dim())
            .map(|j| (0..self.dim()).map(|i| self.mat[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn factorize(&self) -> Result<GalerkinFactor, LinError> {
        let lu = self.mat.partial_piv_lu();
        let mut f = GalerkinFactor {
            space: self.space.clone(),
            lu,
            cond: 0.0,
        };
        let inv = f.inverse_norm_l1();
        f.cond = self.norm_l1() * inv;
        if !f.cond.is_finite() || f.cond > COND_LIMIT {
            return Err(LinError::IllConditioned(f.cond));
        }
        Ok(f)
    }

    /// Container: magic, version, dim (u32 LE), then row-major LE `f64` pairs.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<(), LinError> {
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&(self.dim() as u32).to_le_bytes())?;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let c = self.mat[(i, j)];
                w.write_all(&c.re.to_le_bytes())?;
                w.write_all(&c.im.to_le_bytes())?;
            }
        }
        Ok(())
    }

    /// Reads a dump written by [`GalerkinMatrix::write_binary`] for `space`.
    pub fn read_binary<R: Read>(space: ModeSpace, mut r: R) -> Result<Self, LinError> {
        let mut head = [0u8; 12];
        r.read_exact(&mut head)?;
        if &head[..4] != MAGIC {
            return Err(LinError::Format("bad magic".into()));
        }
        let version = u32::from_le_bytes(head[4..8].try_into().unwrap());
        if version != VERSION {
            return Err(LinError::Format(format!("unsupported version {version}")));
        }
        let dim = u32::from_le_bytes(head[8..12].try_into().unwrap()) as usize;
        if dim != space.dim() {
            return Err(LinError::Format(format!("dimension {dim} does not match mode space {}", space.dim())));
        }
        let mut buf = vec![0u8; 16 * dim * dim];
        r.read_exact(&mut buf)?;
        let at = |p: usize| f64::from_le_bytes(buf[p..p + 8].try_into().unwrap());
        let mat = Mat::from_fn(dim, dim, |i, j| {
            let p = 16 * (i * dim + j);
            Complex64::new(at(p), at(p + 8))
        });
        Ok(Self { space, mat })
    }
}

pub struct GalerkinFactor {
    pub space: ModeSpace,
    lu: PartialPivLu<Complex64>,
    /// 1-norm condition estimate.
    pub cond: f64,
}

impl GalerkinFactor {
    fn solve_vec(&self, b: &[Complex64], adjoint: bool) -> Vec<Complex64> {
        let mut x = Col::from_fn(b.len(), |i| b[i]);
        if adjoint {
            self.lu.solve_adjoint_in_place(&mut x);
        } else {
            self.lu.solve_in_place(&mut x);
        }
        (0..b.len()).map(|i| x[i]).collect()
    }

    /// Hager's estimate of `||A^{-1}||_1`, with Higham's alternating-sign
    /// safeguard.
    fn inverse_norm_l1(&self) -> f64 {
        let n = self.space.dim();
        let l1 = |v: &[Complex64]| v.iter().map(|c| c.norm()).sum::<f64>();
        let mut x = vec![Complex64::new(1.0 / n as f64, 0.0); n];
        let mut est = 0.0;
        let mut last = usize::MAX;
        for _ in 0..5 {
            let y = self.solve_vec(&x, false);
            est = l1(&y);
            let xi: Vec<Complex64> = y
                .iter()
                .map(|c| if c.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { c / c.norm() })
                .collect();
            let z = self.solve_vec(&xi, true);
            let (jmax, zmax) = z
                .iter()
                .enumerate()
                .map(|(j, c)| (j, c.norm()))
                .fold((0, -1.0), |a, b| if b.1 > a.1 { b } else { a });
            let ztx: f64 = z.iter().zip(&x).map(|(a, b)| (a.conj() * b).re).sum();
            if zmax <= ztx || jmax == last {
                break;
            }
            last = jmax;
            x = vec![ZERO; n];
            x[jmax] = Complex64::new(1.0, 0.0);
        }
        let alt: Vec<Complex64> = (0..n)
            .map(|i| {
                let s = if i % 2 == 0 { 1.0 } else { -1.0 };
                let t = if n > 1 { i as f64 / (n - 1) as f64 } else { 0.0 };
                Complex64::new(s * (1.0 + t), 0.0)
            })
            .collect();
        let alt_est = 2.0 * l1(&self.solve_vec(&alt, false)) / (3.0 * n as f64);
        est.max(alt_est)
    }

    pub fn solve(&self, rhs: &StatePair) -> StatePair {
        let b = self.space.restrict(rhs);
        self.space.embed(&self.solve_vec(&b, false))
    }
}

/// Solves `Pi_N L Pi_N h = Pi_N rhs` for `h` supported on `Pi_N`.
pub fn galerkin_solve(gm: &GalerkinMatrix, rhs: &StatePair) -> Result<StatePair, LinError> {
    Ok(gm.factorize()?.solve(rhs))
}
