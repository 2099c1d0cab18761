//! Binary field snapshots.
//!
//! Layout, all integers and floats little-endian:
//!
//! | offset | type        | content                              |
//! |--------|-------------|--------------------------------------|
//! | 0      | `[u8; 4]`   | magic `FNSS`                         |
//! | 4      | `u32`       | format version (1)                   |
//! | 8      | `u32`       | dimension `n`                        |
//! | 12     | `u32`       | resolution `N`                       |
//! | 16     | `f64`       | alpha tag                            |
//! | 24     | `u64`       | entry count `m`                      |
//! | 32     | entries     | `m` records                          |
//!
//! Each record is `n` × `i32` wavenumber components followed by `n` ×
//! (`f64` real, `f64` imaginary). Only lattice points with at least one
//! coefficient whose bit pattern is nonzero are written, in storage order.

use std::io::{Read, Write};

use num_complex::Complex64;

use super::{SpectralField, TorusGrid};
use crate::error::{Error, Result};

pub const SNAPSHOT_MAGIC: &[u8; 4] = b"FNSS";
pub const SNAPSHOT_VERSION: u32 = 1;

pub fn write_snapshot<W: Write>(mut w: W, field: &SpectralField, alpha: f64) -> Result<()> {
    let grid = field.grid();
    let dim = grid.dim();
    let active: Vec<usize> = (0..grid.len())
        .filter(|&idx| {
            field
                .components()
                .iter()
                .any(|c| c[idx].re.to_bits() != 0 || c[idx].im.to_bits() != 0)
        })
        .collect();
    w.write_all(SNAPSHOT_MAGIC)?;
    w.write_all(&SNAPSHOT_VERSION.to_le_bytes())?;
    w.write_all(&(dim as u32).to_le_bytes())?;
    w.write_all(&(grid.resolution() as u32).to_le_bytes())?;
    w.write_all(&alpha.to_le_bytes())?;
    w.write_all(&(active.len() as u64).to_le_bytes())?;
    for idx in active {
        let k = grid.wavenumber(idx);
        for &c in &k[..dim] {
            w.write_all(&(c as i32).to_le_bytes())?;
        }
        for comp in field.components() {
            w.write_all(&comp[idx].re.to_le_bytes())?;
            w.write_all(&comp[idx].im.to_le_bytes())?;
        }
    }
    Ok(())
}

fn read_array<const L: usize, R: Read>(r: &mut R) -> Result<[u8; L]> {
    let mut buf = [0u8; L];
    r.read_exact(&mut buf)?;
    Ok(buf)
}

/// Returns the field and its alpha tag.
pub fn read_snapshot<R: Read>(mut r: R) -> Result<(SpectralField, f64)> {
    let magic: [u8; 4] = read_array(&mut r)?;
    if &magic != SNAPSHOT_MAGIC {
        return Err(Error::Format("not a field snapshot (bad magic)".into()));
    }
    let version = u32::from_le_bytes(read_array(&mut r)?);
    if version != SNAPSHOT_VERSION {
        return Err(Error::Format(format!("unsupported snapshot version {version}")));
    }
    let dim = u32::from_le_bytes(read_array(&mut r)?) as usize;
    let resolution = u32::from_le_bytes(read_array(&mut r)?) as usize;
    let grid = TorusGrid::new(dim, resolution)
        .map_err(|e| Error::Format(format!("bad snapshot header: {e}")))?;
    let alpha = f64::from_le_bytes(read_array(&mut r)?);
    let count = u64::from_le_bytes(read_array(&mut r)?);
    if count > grid.len() as u64 {
        return Err(Error::Format("entry count exceeds lattice size".into()));
    }
    let mut comps = vec![vec![Complex64::new(0.0, 0.0); grid.len()]; dim];
    let mut k = [0i64; 3];
    for _ in 0..count {
        for c in k.iter_mut().take(dim) {
            *c = i32::from_le_bytes(read_array(&mut r)?) as i64;
        }
        let idx = grid
            .index_of(&k[..dim])
            .ok_or_else(|| Error::Format(format!("wavenumber {:?} outside lattice", &k[..dim])))?;
        for comp in comps.iter_mut() {
            let re = f64::from_le_bytes(read_array(&mut r)?);
            let im = f64::from_le_bytes(read_array(&mut r)?);
            comp[idx] = Complex64::new(re, im);
        }
    }
    Ok((SpectralField::from_components(grid, comps)?, alpha))
}

pub fn save_snapshot(path: &std::path::Path, field: &SpectralField, alpha: f64) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    write_snapshot(&mut w, field, alpha)?;
    w.flush()?;
    Ok(())
}

pub fn load_snapshot(path: &std::path::Path) -> Result<(SpectralField, f64)> {
    let file = std::fs::File::open(path)?;
    read_snapshot(std::io::BufReader::new(file))
}
