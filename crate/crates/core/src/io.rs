//! Serialization of fields, trajectories and result tables.
//!
//! Binary field record, all numbers little-endian:
//!
//! | bytes | content                                        |
//! |-------|------------------------------------------------|
//! | 4     | magic `BOFD`                                   |
//! | 1     | format version (1)                             |
//! | 1     | kind: 0 = real samples, 1 = complex coefficients |
//! | 8     | `λ` as f64                                     |
//! | 8     | `M` as u64                                     |
//! | 8·M or 16·M | samples, or `(re, im)` pairs in FFT order |
//!
//! A binary trajectory is `BOTR`, version, `t0` (f64), `dt` (f64), the
//! number of states (u64), then one complex field record per state.
//!
//! CSV floats are written with 17 significant digits so output is
//! reproducible byte for byte.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{MonitorRow, Trajectory};
use crate::gauge::GaugeResidualRow;
use crate::grid::Grid;
use crate::picard::{SeriesRow, SweepRow};
use crate::spectral::{RealField, SpectralField};

const FIELD_MAGIC: &[u8; 4] = b"BOFD";
const TRAJ_MAGIC: &[u8; 4] = b"BOTR";
const VERSION: u8 = 1;
const KIND_REAL: u8 = 0;
const KIND_COMPLEX: u8 = 1;

/// A field in either representation.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Real(RealField),
    Spectral(SpectralField),
}

fn write_header(w: &mut impl Write, kind: u8, grid: &Grid) -> Result<()> {
    w.write_all(FIELD_MAGIC)?;
    w.write_all(&[VERSION, kind])?;
    w.write_all(&grid.lambda().to_le_bytes())?;
    w.write_all(&(grid.n_modes() as u64).to_le_bytes())?;
    Ok(())
}

fn read_f64(r: &mut impl Read) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_magic(r: &mut impl Read, magic: &[u8; 4]) -> Result<()> {
    let mut m = [0u8; 5];
    r.read_exact(&mut m)?;
    if &m[..4] != magic {
        return Err(Error::Format(format!(
            "bad magic, expected {}",
            String::from_utf8_lossy(magic)
        )));
    }
    if m[4] != VERSION {
        return Err(Error::Format(format!("unsupported version {}", m[4])));
    }
    Ok(())
}

pub fn write_real_field(w: &mut impl Write, f: &RealField) -> Result<()> {
    write_header(w, KIND_REAL, f.grid())?;
    for v in f.samples() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn write_spectral_field(w: &mut impl Write, f: &SpectralField) -> Result<()> {
    write_header(w, KIND_COMPLEX, f.grid())?;
    for c in f.coeffs() {
        w.write_all(&c.re.to_le_bytes())?;
        w.write_all(&c.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_field(r: &mut impl Read) -> Result<Field> {
    read_magic(r, FIELD_MAGIC)?;
    let mut kind = [0u8; 1];
    r.read_exact(&mut kind)?;
    let lambda = read_f64(r)?;
    let m = read_u64(r)? as usize;
    let grid = Grid::new(lambda, m)?;
    match kind[0] {
        KIND_REAL => {
            let samples = (0..m).map(|_| read_f64(r)).collect::<Result<Vec<_>>>()?;
            Ok(Field::Real(RealField::new(grid, samples)?))
        }
        KIND_COMPLEX => {
            let coeffs = (0..m)
                .map(|_| Ok(Complex64::new(read_f64(r)?, read_f64(r)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(Field::Spectral(SpectralField::new(grid, coeffs)?))
        }
        k => Err(Error::Format(format!("unknown field kind {k}"))),
    }
}

pub fn write_trajectory(w: &mut impl Write, traj: &Trajectory) -> Result<()> {
    w.write_all(TRAJ_MAGIC)?;
    w.write_all(&[VERSION])?;
    w.write_all(&traj.t0().to_le_bytes())?;
    w.write_all(&traj.dt().to_le_bytes())?;
    w.write_all(&(traj.len() as u64).to_le_bytes())?;
    for s in traj.states() {
        write_spectral_field(w, s)?;
    }
    Ok(())
}

pub fn read_trajectory(r: &mut impl Read) -> Result<Trajectory> {
    read_magic(r, TRAJ_MAGIC)?;
    let t0 = read_f64(r)?;
    let dt = read_f64(r)?;
    let n = read_u64(r)? as usize;
    let mut states = Vec::with_capacity(n.min(1 << 20));
    for _ in 0..n {
        match read_field(r)? {
            Field::Spectral(s) => states.push(s),
            Field::Real(_) => return Err(Error::Format("trajectory states must be spectral".into())),
        }
    }
    let grid = *states
        .first()
        .ok_or(Error::TooFewSamples { needed: 1, got: 0 })?
        .grid();
    Trajectory::new(grid, t0, dt, states)
}

/// JSON form `{lambda, M, samples}` or `{lambda, M, coeffs: [[re, im], …]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldRecord {
    pub lambda: f64,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<[f64; 2]>>,
}

impl FieldRecord {
    pub fn from_real(f: &RealField) -> Self {
        FieldRecord {
            lambda: f.grid().lambda(),
            m: f.grid().n_modes(),
            samples: Some(f.samples().to_vec()),
            coeffs: None,
        }
    }

    pub fn from_spectral(f: &SpectralField) -> Self {
        FieldRecord {
            lambda: f.grid().lambda(),
            m: f.grid().n_modes(),
            samples: None,
            coeffs: Some(f.coeffs().iter().map(|c| [c.re, c.im]).collect()),
        }
    }

    pub fn into_field(self) -> Result<Field> {
        let grid = Grid::new(self.lambda, self.m)?;
        match (self.samples, self.coeffs) {
            (Some(s), None) => Ok(Field::Real(RealField::new(grid, s)?)),
            (None, Some(c)) => Ok(Field::Spectral(SpectralField::new(
                grid,
                c.into_iter().map(|[re, im]| Complex64::new(re, im)).collect(),
            )?)),
            _ => Err(Error::Format("exactly one of samples/coeffs required".into())),
        }
    }
}

pub fn field_to_json(f: &Field) -> Result<String> {
    let rec = match f {
        Field::Real(r) => FieldRecord::from_real(r),
        Field::Spectral(s) => FieldRecord::from_spectral(s),
    };
    serde_json::to_string(&rec).map_err(|e| Error::Format(e.to_string()))
}

pub fn field_from_json(s: &str) -> Result<Field> {
    let rec: FieldRecord = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
    rec.into_field()
}

/// Fixed 17-significant-digit float formatting.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_rows<W: Write>(w: &mut W, header: &str, rows: impl Iterator<Item = String>) -> Result<()> {
    writeln!(w, "{header}")?;
    for r in rows {
        writeln!(w, "{r}")?;
    }
    Ok(())
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| fmt_f64(*v)).collect::<Vec<_>>().join(",")
}

/// Long format `t,x,u` (real part of each state).
pub fn write_trajectory_csv(w: &mut impl Write, traj: &Trajectory) -> Result<()> {
    let xs = traj.grid().points();
    writeln!(w, "t,x,u")?;
    for (i, u) in traj.physical().iter().enumerate() {
        let t = traj.time(i);
        for (x, v) in xs.iter().zip(u.samples()) {
            writeln!(w, "{}", join(&[t, *x, *v]))?;
        }
    }
    Ok(())
}

pub fn write_monitor_csv(w: &mut impl Write, rows: &[MonitorRow]) -> Result<()> {
    write_rows(
        w,
        "t,mean,momentum,energy_plus,energy_minus",
        rows.iter()
            .map(|r| join(&[r.t, r.mean, r.momentum, r.energy_plus, r.energy_minus])),
    )
}

pub fn write_gauge_residual_csv(w: &mut impl Write, rows: &[GaugeResidualRow]) -> Result<()> {
    write_rows(
        w,
        "t,residual_F,residual_w,residual_w2",
        rows.iter()
            .map(|r| join(&[r.t, r.residual_f, r.residual_w, r.residual_w2])),
    )
}

pub fn write_sweep_csv(w: &mut impl Write, rows: &[SweepRow]) -> Result<()> {
    write_rows(
        w,
        "N,norm_psi,norm_A3,ratio,eps_N",
        rows.iter().map(|r| {
            format!(
                "{},{}",
                r.n,
                join(&[r.norm_psi, r.norm_a3, r.ratio, r.eps_n])
            )
        }),
    )
}

pub fn write_series_csv(w: &mut impl Write, rows: &[SeriesRow]) -> Result<()> {
    write_rows(w, "t,error", rows.iter().map(|r| join(&[r.t, r.error])))
}

pub fn write_ratio_csv(w: &mut impl Write, ratios: &[f64]) -> Result<()> {
    write_rows(
        w,
        "sample_id,ratio",
        ratios.iter().enumerate().map(|(i, r)| format!("{i},{}", fmt_f64(*r))),
    )
}

/// Generic numeric table with a header.
pub fn write_table_csv(w: &mut impl Write, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    write_rows(w, &header.join(","), rows.iter().map(|r| join(r)))
}
