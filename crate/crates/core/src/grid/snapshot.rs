//! Binary state snapshots: magic `ANISOB01`, little-endian `u32` point counts,
//! `f64` side lengths and time, then `v1, v2, v3, theta` as `(re, im)` pairs
//! with the first index fastest.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::field::SpectralField;
use super::state::BoussinesqState;
use super::BoxSpec;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 8] = b"ANISOB01";

pub fn write_state<W: Write>(mut w: W, s: &BoussinesqState) -> Result<()> {
    let b = s.box_spec();
    w.write_all(MAGIC)?;
    for n in b.n() {
        w.write_all(&(n as u32).to_le_bytes())?;
    }
    for l in b.lengths() {
        w.write_all(&l.to_le_bytes())?;
    }
    w.write_all(&s.time.to_le_bytes())?;
    for f in &s.fields {
        for c in f.coeffs() {
            w.write_all(&c.re.to_le_bytes())?;
            w.write_all(&c.im.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

fn read_exact<R: Read, const N: usize>(r: &mut R) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf)
        .map_err(|e| Error::Format(format!("truncated snapshot: {e}")))?;
    Ok(buf)
}

pub fn read_state<R: Read>(mut r: R) -> Result<BoussinesqState> {
    let magic: [u8; 8] = read_exact(&mut r)?;
    if &magic != MAGIC {
        return Err(Error::Format("bad magic bytes".into()));
    }
    let mut n = [0usize; 3];
    for slot in &mut n {
        *slot = u32::from_le_bytes(read_exact(&mut r)?) as usize;
    }
    let mut len = [0.0; 3];
    for slot in &mut len {
        *slot = f64::from_le_bytes(read_exact(&mut r)?);
    }
    let time = f64::from_le_bytes(read_exact(&mut r)?);
    let b = BoxSpec::new(n, len).map_err(|e| Error::Format(e.to_string()))?;
    let mut bytes = vec![0u8; b.total() * 16];
    let mut comps = Vec::with_capacity(4);
    for _ in 0..4 {
        r.read_exact(&mut bytes)
            .map_err(|e| Error::Format(format!("truncated snapshot: {e}")))?;
        let coeffs: Vec<Complex64> = bytes
            .chunks_exact(16)
            .map(|c| {
                Complex64::new(
                    f64::from_le_bytes(c[..8].try_into().unwrap()),
                    f64::from_le_bytes(c[8..].try_into().unwrap()),
                )
            })
            .collect();
        comps.push(SpectralField::from_coeffs(b, coeffs)?);
    }
    let fields: [SpectralField; 4] = comps.try_into().unwrap();
    BoussinesqState::new(fields, time)
}

pub fn save(path: &Path, s: &BoussinesqState) -> Result<()> {
    write_state(BufWriter::new(File::create(path)?), s)
}

pub fn load(path: &Path) -> Result<BoussinesqState> {
    read_state(BufReader::new(File::open(path)?))
}
