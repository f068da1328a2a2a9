//! Field serialization.
//!
//! Binary layout, little endian: magic `TKFD`, format version `u32`,
//! `n_max` `u32`, then `(2 n_max + 1)^2` pairs of `f64` (re, im) in
//! row-major `k` order. The JSON form carries the same data as
//! `{"n_max": .., "coeffs": [[re, im], ..]}`.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::field::TorusField;
use crate::lattice::Lattice;
use crate::SpectralError;

pub const MAGIC: [u8; 4] = *b"TKFD";
pub const VERSION: u32 = 1;

pub fn write_binary<W: Write>(u: &TorusField, mut w: W) -> Result<(), SpectralError> {
    w.write_all(&MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(u.lattice().n_max() as u32).to_le_bytes())?;
    for c in u.coeffs() {
        w.write_all(&c.re.to_le_bytes())?;
        w.write_all(&c.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_binary<R: Read>(mut r: R) -> Result<TorusField, SpectralError> {
    let mut head = [0u8; 12];
    r.read_exact(&mut head)?;
    if head[..4] != MAGIC {
        return Err(SpectralError::Format("bad magic".into()));
    }
    let version = u32::from_le_bytes(head[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(SpectralError::Format(format!("unsupported version {version}")));
    }
    let n_max = u32::from_le_bytes(head[8..12].try_into().unwrap()) as usize;
    let lat = Lattice::new(n_max);
    let mut buf = vec![0u8; 16 * lat.len()];
    r.read_exact(&mut buf)?;
    let coeffs = buf
        .chunks_exact(16)
        .map(|b| {
            Complex64::new(
                f64::from_le_bytes(b[..8].try_into().unwrap()),
                f64::from_le_bytes(b[8..].try_into().unwrap()),
            )
        })
        .collect();
    TorusField::from_coeffs(lat, coeffs)
}

#[derive(Serialize, Deserialize)]
struct JsonField {
    n_max: usize,
    coeffs: Vec<[f64; 2]>,
}

pub fn to_json(u: &TorusField) -> Result<String, SpectralError> {
    let j = JsonField {
        n_max: u.lattice().n_max(),
        coeffs: u.coeffs().iter().map(|c| [c.re, c.im]).collect(),
    };
    Ok(serde_json::to_string(&j)?)
}

pub fn from_json(s: &str) -> Result<TorusField, SpectralError> {
    let j: JsonField = serde_json::from_str(s)?;
    let coeffs = j.coeffs.iter().map(|c| Complex64::new(c[0], c[1])).collect();
    TorusField::from_coeffs(Lattice::new(j.n_max), coeffs)
}
