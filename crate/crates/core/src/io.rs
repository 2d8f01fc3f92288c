//! CSV emission and the binary `HE4F` checkpoint.
//!
//! Checkpoint layout, little-endian throughout:
//!
//! ```text
//! b"HE4F"            magic
//! u32                n_points
//! f64                domain_length
//! f64                tau
//! [f64; 2·n_points]  re, im pairs
//! ```
//!
//! The coefficients are not stored; readers supply them.

use std::io::{self, Read, Write};

use num_complex::Complex64;
use thiserror::Error;

use crate::dispersion::TableRow;
use crate::grid::{FieldState, Grid, GridError};
use crate::params::DimensionlessCoefficients;
use crate::spectral::Observables;

pub const DEFAULT_PRECISION: usize = 9;
pub const CHECKPOINT_MAGIC: &[u8; 4] = b"HE4F";

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("not a checkpoint: bad magic {0:?}")]
    BadMagic([u8; 4]),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Scientific notation with `digits` significant digits, independent of locale.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x.is_finite() {
        format!("{:.*e}", digits.max(1) - 1, x)
    } else {
        x.to_string()
    }
}

fn table<W: Write, const N: usize>(
    w: W,
    header: [&str; N],
    rows: impl IntoIterator<Item = [Option<f64>; N]>,
    digits: usize,
) -> Result<(), IoError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header)?;
    for row in rows {
        out.write_record(
            row.iter()
                .map(|v| v.map_or(String::new(), |x| fmt_sig(x, digits))),
        )?;
    }
    out.flush()?;
    Ok(())
}

/// `k_per_angstrom,E_over_kB_K`; rows with a negative radicand leave the
/// energy cell empty.
pub fn write_dispersion_csv<W: Write>(
    w: W,
    rows: &[TableRow],
    digits: usize,
) -> Result<(), IoError> {
    table(
        w,
        ["k_per_angstrom", "E_over_kB_K"],
        rows.iter().map(|r| [Some(r.k_per_angstrom), r.e_over_kb]),
        digits,
    )
}

/// `xi,re_psi,im_psi,F` for one state.
pub fn write_profile_csv<W: Write>(w: W, state: &FieldState, digits: usize) -> Result<(), IoError> {
    let g = state.grid;
    table(
        w,
        ["xi", "re_psi", "im_psi", "F"],
        state.psi.iter().enumerate().map(|(j, z)| {
            [
                Some(g.point(j)),
                Some(z.re),
                Some(z.im),
                Some(z.norm_sqr() - 1.0),
            ]
        }),
        digits,
    )
}

/// `s_m,eta_m` for a physical surface profile.
pub fn write_surface_csv<W: Write>(
    w: W,
    s: &[f64],
    eta: &[f64],
    digits: usize,
) -> Result<(), IoError> {
    table(
        w,
        ["s_m", "eta_m"],
        s.iter().zip(eta).map(|(&a, &b)| [Some(a), Some(b)]),
        digits,
    )
}

pub fn write_observables_csv<W: Write>(
    w: W,
    series: &[Observables],
    digits: usize,
) -> Result<(), IoError> {
    table(
        w,
        ["tau", "norm", "max_F", "min_F"],
        series
            .iter()
            .map(|o| [Some(o.tau), Some(o.norm), Some(o.max_f), Some(o.min_f)]),
        digits,
    )
}

/// Long-format `tau,xi,F` rows for a sequence of snapshots.
pub fn write_snapshots_csv<W: Write>(
    w: W,
    states: &[FieldState],
    digits: usize,
) -> Result<(), IoError> {
    table(
        w,
        ["tau", "xi", "F"],
        states.iter().flat_map(|s| {
            s.psi
                .iter()
                .enumerate()
                .map(move |(j, z)| [Some(s.tau), Some(s.grid.point(j)), Some(z.norm_sqr() - 1.0)])
        }),
        digits,
    )
}

pub fn write_checkpoint<W: Write>(mut w: W, state: &FieldState) -> Result<(), IoError> {
    let n = u32::try_from(state.grid.n())
        .map_err(|_| io::Error::new(io::ErrorKind::InvalidInput, "grid too large"))?;
    w.write_all(CHECKPOINT_MAGIC)?;
    w.write_all(&n.to_le_bytes())?;
    w.write_all(&state.grid.length().to_le_bytes())?;
    w.write_all(&state.tau.to_le_bytes())?;
    for z in &state.psi {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

fn read_f64<R: Read>(r: &mut R) -> io::Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

pub fn read_checkpoint<R: Read>(
    mut r: R,
    scales: DimensionlessCoefficients,
) -> Result<FieldState, IoError> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != CHECKPOINT_MAGIC {
        return Err(IoError::BadMagic(magic));
    }
    let mut nb = [0u8; 4];
    r.read_exact(&mut nb)?;
    let n = u32::from_le_bytes(nb) as usize;
    let length = read_f64(&mut r)?;
    let tau = read_f64(&mut r)?;
    let grid = Grid::new(n, length)?;
    let psi = (0..n)
        .map(|_| Ok(Complex64::new(read_f64(&mut r)?, read_f64(&mut r)?)))
        .collect::<io::Result<Vec<_>>>()?;
    Ok(FieldState::new(grid, tau, psi, scales)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{dimensionless_coefficients, Preset, DEFAULT_ZETA0};

    fn state() -> FieldState {
        let a = dimensionless_coefficients(&Preset::Case1.film(DEFAULT_ZETA0).unwrap());
        let g = Grid::new(64, 12.5).unwrap();
        let psi = (0..64)
            .map(|j| Complex64::new((j as f64 * 0.3).cos(), 1.0 / 3.0 + j as f64))
            .collect();
        FieldState::new(g, 0.75, psi, a).unwrap()
    }

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(20.557653512, 9), "2.05576535e1");
        assert_eq!(fmt_sig(-0.000123, 3), "-1.23e-4");
        assert_eq!(fmt_sig(0.0, 2), "0.0e0");
        assert_eq!(fmt_sig(f64::NAN, 9), "NaN");
    }

    #[test]
    fn dispersion_gaps_are_empty_cells() {
        let rows = [
            TableRow {
                k_per_angstrom: 0.0,
                e_over_kb: Some(0.0),
            },
            TableRow {
                k_per_angstrom: 1.5,
                e_over_kb: None,
            },
        ];
        let mut buf = Vec::new();
        write_dispersion_csv(&mut buf, &rows, 9).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "k_per_angstrom,E_over_kB_K\n0.00000000e0,0.00000000e0\n1.50000000e0,\n"
        );
    }

    #[test]
    fn checkpoint_is_bit_identical() {
        let s = state();
        let mut buf = Vec::new();
        write_checkpoint(&mut buf, &s).unwrap();
        assert_eq!(buf.len(), 4 + 4 + 8 + 8 + 16 * 64);
        assert_eq!(&buf[..4], b"HE4F");
        assert_eq!(u32::from_le_bytes(buf[4..8].try_into().unwrap()), 64);
        let back = read_checkpoint(buf.as_slice(), s.scales).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn checkpoint_rejects_garbage() {
        let s = state();
        assert!(matches!(
            read_checkpoint(&b"NOPE0000"[..], s.scales),
            Err(IoError::BadMagic(_))
        ));
        let mut buf = Vec::new();
        write_checkpoint(&mut buf, &s).unwrap();
        buf.truncate(100);
        assert!(matches!(
            read_checkpoint(buf.as_slice(), s.scales),
            Err(IoError::Io(_))
        ));
    }

    #[test]
    fn profile_and_snapshot_columns() {
        let s = state();
        let mut buf = Vec::new();
        write_profile_csv(&mut buf, &s, 4).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("xi,re_psi,im_psi,F"));
        assert_eq!(lines.count(), 64);
        let mut buf = Vec::new();
        write_snapshots_csv(&mut buf, &[s.clone(), s], 4).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 129);
    }
}
