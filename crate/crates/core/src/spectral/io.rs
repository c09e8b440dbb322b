//! Snapshot serialization and 1D spectra.
//!
//! A snapshot is a pair of files: `<stem>.bin` holding the physical samples
//! as little-endian `f64` in `(i1, i2, j)` order, and `<stem>.json` holding
//! the header needed to interpret them.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::field::SpectralField;
use super::grid::{GridSpec, Parity};
use super::transform::{forward_transform, inverse_transform};
use crate::error::{Error, Result};
use crate::output::{write_atomic, CsvTable};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotHeader {
    pub name: String,
    pub grid: GridSpec,
    pub parity: Parity,
    pub time: f64,
    pub shape: [usize; 3],
    pub dtype: String,
}

fn paths(dir: &Path, stem: &str) -> (PathBuf, PathBuf) {
    (dir.join(format!("{stem}.bin")), dir.join(format!("{stem}.json")))
}

pub fn write_snapshot(dir: &Path, stem: &str, field: &SpectralField, time: f64) -> Result<()> {
    let g = *field.grid();
    let samples = inverse_transform(field);
    let mut bytes = Vec::with_capacity(samples.len() * 8);
    for v in &samples {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    let header = SnapshotHeader {
        name: stem.to_string(),
        grid: g,
        parity: field.parity(),
        time,
        shape: [g.nh, g.nh, g.nv],
        dtype: "f64le".into(),
    };
    let (bin, json) = paths(dir, stem);
    write_atomic(&bin, &bytes)?;
    write_atomic(&json, serde_json::to_string_pretty(&header)?.as_bytes())?;
    Ok(())
}

pub fn read_snapshot(dir: &Path, stem: &str) -> Result<(SnapshotHeader, SpectralField)> {
    let (bin, json) = paths(dir, stem);
    let header: SnapshotHeader = serde_json::from_slice(&std::fs::read(json)?)?;
    let bytes = std::fs::read(bin)?;
    if bytes.len() % 8 != 0 {
        return Err(Error::Shape {
            expected: header.grid.len() * 8,
            got: bytes.len(),
            grid: header.grid.describe(),
        });
    }
    let samples: Vec<f64> = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    let field = forward_transform(&header.grid, &samples, header.parity)?;
    Ok((header, field))
}

/// Horizontal shell spectrum: energy `int |f|^2` summed over modes whose
/// rounded horizontal mode radius equals each shell index, all vertical
/// modes included. Returns `(shell_wavenumber, energy)` pairs.
pub fn shell_spectrum(f: &SpectralField) -> Vec<(f64, f64)> {
    let g = f.grid();
    let shells = g.nh / 2 + 1;
    let mut e = vec![0.0; shells];
    for i1 in 0..g.nh {
        for i2 in 0..g.nh {
            let m1 = g.mode_number(i1) as f64;
            let m2 = g.mode_number(i2) as f64;
            let s = ((m1 * m1 + m2 * m2).sqrt().round() as usize).min(shells - 1);
            for n in 0..g.nv {
                e[s] += g.vertical_weight(n) * f.get(i1, i2, n).norm_sqr() * g.volume();
            }
        }
    }
    let dk = 2.0 * std::f64::consts::PI / g.l;
    e.into_iter()
        .enumerate()
        .map(|(s, v)| (s as f64 * dk, v))
        .collect()
}

pub fn write_shell_spectrum(path: &Path, f: &SpectralField) -> Result<()> {
    let mut t = CsvTable::new(&["xi", "energy"]);
    for (xi, e) in shell_spectrum(f) {
        t.push(vec![xi, e]);
    }
    t.write(path)
}
