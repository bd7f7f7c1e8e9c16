//! File formats: ESRI ASCII grids for DEMs and roughness maps, CSV for
//! comparison matrices, and binary PGM (P5) for grayscale rendering.
//!
//! All floating-point text output uses Rust's shortest round-trip decimal
//! formatting, so reading a written file reproduces values bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::gridding::{Dem, GridSpec};
use crate::roughness::RoughnessIndex;

/// NoData marker used in ESRI ASCII output.
pub const NODATA: f64 = -9999.0;

/// Serializes a DEM as an ESRI ASCII grid.
///
/// Header lines are `ncols`, `nrows`, `xllcorner`, `yllcorner`, `cellsize`
/// and `NODATA_value -9999`, followed by `nrows` lines of `ncols`
/// space-separated values with the northernmost row first.
pub fn asc_string(dem: &Dem) -> String {
    let spec = dem.spec();
    let mut out = String::new();
    writeln!(out, "ncols {}", spec.ncols).unwrap();
    writeln!(out, "nrows {}", spec.nrows).unwrap();
    writeln!(out, "xllcorner {}", spec.x0).unwrap();
    writeln!(out, "yllcorner {}", spec.y0).unwrap();
    writeln!(out, "cellsize {}", spec.cell).unwrap();
    writeln!(out, "NODATA_value {}", NODATA).unwrap();
    for row in 0..spec.nrows {
        for col in 0..spec.ncols {
            if col > 0 {
                out.push(' ');
            }
            match dem.get(row, col) {
                Some(v) => write!(out, "{v}").unwrap(),
                None => write!(out, "{NODATA}").unwrap(),
            }
        }
        out.push('\n');
    }
    out
}

/// Writes a DEM to `path` in ESRI ASCII format. See [`asc_string`].
pub fn write_asc<P: AsRef<Path>>(dem: &Dem, path: P) -> Result<()> {
    fs::write(path, asc_string(dem))?;
    Ok(())
}

/// Parses an ESRI ASCII grid.
///
/// Header keys are matched case-insensitively; the `NODATA_value` line is
/// optional and defaults to −9999. Data values may wrap across lines freely.
/// Cells equal to the NoData marker are masked out.
pub fn parse_asc(text: &str) -> Result<Dem> {
    let mut ncols: Option<usize> = None;
    let mut nrows: Option<usize> = None;
    let mut xllcorner: Option<f64> = None;
    let mut yllcorner: Option<f64> = None;
    let mut cellsize: Option<f64> = None;
    let mut nodata = NODATA;

    let mut values: Vec<f64> = Vec::new();
    let mut in_header = true;
    let mut last_line = 0;
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        last_line = lineno;
        let mut tokens = raw.split_whitespace();
        let Some(first) = tokens.next() else { continue };

        if in_header && first.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) {
            let value = tokens.next().ok_or_else(|| Error::Parse {
                line: lineno,
                msg: format!("header key `{first}` has no value"),
            })?;
            let parse_usize = |v: &str| {
                v.parse::<usize>().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("invalid integer `{v}` for `{first}`"),
                })
            };
            let parse_f64 = |v: &str| {
                v.parse::<f64>().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("invalid number `{v}` for `{first}`"),
                })
            };
            match first.to_ascii_lowercase().as_str() {
                "ncols" => ncols = Some(parse_usize(value)?),
                "nrows" => nrows = Some(parse_usize(value)?),
                "xllcorner" => xllcorner = Some(parse_f64(value)?),
                "yllcorner" => yllcorner = Some(parse_f64(value)?),
                "cellsize" => cellsize = Some(parse_f64(value)?),
                "nodata_value" => nodata = parse_f64(value)?,
                other => {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("unknown header key `{other}`"),
                    })
                }
            }
            continue;
        }

        in_header = false;
        for token in std::iter::once(first).chain(tokens) {
            let v: f64 = token.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("invalid grid value `{token}`"),
            })?;
            if v == nodata {
                values.push(f64::NAN);
            } else if v.is_finite() {
                values.push(v);
            } else {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("non-finite grid value `{token}`"),
                });
            }
        }
    }

    let missing = |key: &str| Error::Parse {
        line: last_line,
        msg: format!("missing required header `{key}`"),
    };
    let ncols = ncols.ok_or_else(|| missing("ncols"))?;
    let nrows = nrows.ok_or_else(|| missing("nrows"))?;
    let x0 = xllcorner.ok_or_else(|| missing("xllcorner"))?;
    let y0 = yllcorner.ok_or_else(|| missing("yllcorner"))?;
    let cell = cellsize.ok_or_else(|| missing("cellsize"))?;

    let spec = GridSpec::new(x0, y0, ncols, nrows, cell)?;
    if values.len() != spec.len() {
        return Err(Error::Parse {
            line: last_line,
            msg: format!("expected {} grid values, found {}", spec.len(), values.len()),
        });
    }
    Dem::from_values(spec, values)
}

/// Reads an ESRI ASCII grid from `path`. See [`parse_asc`].
pub fn read_asc<P: AsRef<Path>>(path: P) -> Result<Dem> {
    parse_asc(&fs::read_to_string(path)?)
}

/// Formats a labeled 5×5 matrix as CSV.
///
/// The corner cell is `index`, followed by one column per label; each data
/// row repeats its label first. Undefined entries are written as `nan`.
pub fn matrix_csv(labels: &[RoughnessIndex; 5], cells: &[[f64; 5]; 5]) -> String {
    let mut out = String::from("index");
    for label in labels {
        write!(out, ",{label}").unwrap();
    }
    out.push('\n');
    for (label, row) in labels.iter().zip(cells) {
        write!(out, "{label}").unwrap();
        for v in row {
            if v.is_nan() {
                out.push_str(",nan");
            } else {
                write!(out, ",{v}").unwrap();
            }
        }
        out.push('\n');
    }
    out
}

/// Writes a labeled 5×5 matrix to `path` as CSV. See [`matrix_csv`].
pub fn write_matrix_csv<P: AsRef<Path>>(
    path: P,
    labels: &[RoughnessIndex; 5],
    cells: &[[f64; 5]; 5],
) -> Result<()> {
    fs::write(path, matrix_csv(labels, cells))?;
    Ok(())
}

/// Renders a grid as a binary PGM (P5, maxval 255) image.
///
/// Values are min–max normalized to [0, 1] and mapped linearly to gray
/// levels with half-up rounding: `(t·255).round()`. NoData cells render as
/// 0, as does everything in a constant grid. Fails with [`Error::EmptyMap`]
/// when no cell is valid.
pub fn pgm_bytes(dem: &Dem) -> Result<Vec<u8>> {
    let (lo, hi) = dem.min_max().ok_or(Error::EmptyMap)?;
    let mut out = format!("P5\n{} {}\n255\n", dem.ncols(), dem.nrows()).into_bytes();
    out.reserve(dem.spec().len());
    for row in 0..dem.nrows() {
        for col in 0..dem.ncols() {
            let byte = match dem.get(row, col) {
                Some(v) if hi > lo => {
                    let t = (v - lo) / (hi - lo);
                    (t * 255.0).round() as u8
                }
                Some(_) => 0,
                None => 0,
            };
            out.push(byte);
        }
    }
    Ok(out)
}

/// Writes a grid to `path` as a binary PGM image. See [`pgm_bytes`].
pub fn write_pgm<P: AsRef<Path>>(dem: &Dem, path: P) -> Result<()> {
    fs::write(path, pgm_bytes(dem)?)?;
    Ok(())
}
