//! Derived raster layers: 3×3 slope and curvature kernels, the 5×5 focal
//! mean, and residual topography (original minus smoothed elevations).

use rayon::prelude::*;

use crate::gridding::Dem;

/// A 3×3 sample around one cell, row-major with row 0 to the north:
///
/// ```text
/// z1 z2 z3
/// z4 z5 z6
/// z7 z8 z9
/// ```
///
/// `z[k]` holds z(k+1); all nine values are finite once edge replication has
/// run (see [`gather_window`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window3 {
    pub z: [f64; 9],
}

/// Collects the 3×3 neighbourhood of a valid cell. Neighbours that fall
/// outside the raster or are NoData take the centre's elevation, so border
/// cells still produce a full window and derived maps keep the DEM's extent.
///
/// Returns `None` when the centre itself is NoData.
pub fn gather_window(dem: &Dem, row: usize, col: usize) -> Option<Window3> {
    let center = dem.get(row, col)?;
    let mut z = [center; 9];
    let (nrows, ncols) = (dem.nrows() as isize, dem.ncols() as isize);
    let mut k = 0;
    for dr in -1..=1isize {
        for dc in -1..=1isize {
            let (r, c) = (row as isize + dr, col as isize + dc);
            if r >= 0 && r < nrows && c >= 0 && c < ncols {
                if let Some(v) = dem.get(r as usize, c as usize) {
                    z[k] = v;
                }
            }
            k += 1;
        }
    }
    Some(Window3 { z })
}

/// Slope in radians of the window's centre cell for cell size `cell`:
///
/// ```text
/// dz/dx = [(z3 + 2·z6 + z9) − (z1 + 2·z4 + z7)] / (8·cell)
/// dz/dy = [(z7 + 2·z8 + z9) − (z1 + 2·z2 + z3)] / (8·cell)
/// slope = atan( sqrt( (dz/dx)² + (dz/dy)² ) )
/// ```
///
/// Result lies in [0, π/2).
pub fn slope_cell(w: &Window3, cell: f64) -> f64 {
    debug_assert!(cell > 0.0, "cell size must be positive");
    let [z1, z2, z3, z4, _z5, z6, z7, z8, z9] = w.z;
    let dzdx = ((z3 + 2.0 * z6 + z9) - (z1 + 2.0 * z4 + z7)) / (8.0 * cell);
    let dzdy = ((z7 + 2.0 * z8 + z9) - (z1 + 2.0 * z2 + z3)) / (8.0 * cell);
    (dzdx * dzdx + dzdy * dzdy).sqrt().atan()
}

/// Zevenbergen–Thorne curvature (1/m) of the window's centre cell:
///
/// ```text
/// D = [(z4 + z6)/2 − z5] / cell²
/// E = [(z2 + z8)/2 − z5] / cell²
/// curvature = 2E + 2D
/// ```
pub fn curvature_cell(w: &Window3, cell: f64) -> f64 {
    debug_assert!(cell > 0.0, "cell size must be positive");
    let [_z1, z2, _z3, z4, z5, z6, _z7, z8, _z9] = w.z;
    let l2 = cell * cell;
    let d = ((z4 + z6) / 2.0 - z5) / l2;
    let e = ((z2 + z8) / 2.0 - z5) / l2;
    2.0 * e + 2.0 * d
}

/// Applies a per-window kernel to every valid cell, in parallel over rows.
/// NoData cells stay NoData; per-cell arithmetic is fixed, so the result is
/// bit-identical for any thread count.
fn map_windowed<F>(dem: &Dem, f: F) -> Dem
where
    F: Fn(&Window3, f64) -> f64 + Sync,
{
    let spec = dem.spec();
    let mut values = vec![f64::NAN; spec.len()];
    let mut mask = vec![false; spec.len()];
    values
        .par_chunks_mut(spec.ncols)
        .zip(mask.par_chunks_mut(spec.ncols))
        .enumerate()
        .for_each(|(row, (vrow, mrow))| {
            for col in 0..spec.ncols {
                if let Some(w) = gather_window(dem, row, col) {
                    vrow[col] = f(&w, spec.cell);
                    mrow[col] = true;
                }
            }
        });
    Dem::from_parts(spec, values, mask)
}

/// Slope (radians) at every valid cell; same extent as the input.
pub fn slope_map(dem: &Dem) -> Dem {
    map_windowed(dem, slope_cell)
}

/// Curvature (1/m) at every valid cell; same extent as the input.
pub fn curvature_map(dem: &Dem) -> Dem {
    map_windowed(dem, curvature_cell)
}

/// 5×5 focal mean. Each valid cell receives the arithmetic mean of the
/// valid cells in its 5×5 neighbourhood (centre included); the neighbourhood
/// is truncated at raster edges rather than padded.
///
/// The mean is accumulated as `centre + Σ(v − centre)/k`, which is exact for
/// constant input: a flat DEM smooths to itself bit-for-bit.
pub fn focal_mean5(dem: &Dem) -> Dem {
    let spec = dem.spec();
    let (nrows, ncols) = (spec.nrows as isize, spec.ncols as isize);
    let mut values = vec![f64::NAN; spec.len()];
    let mut mask = vec![false; spec.len()];
    values
        .par_chunks_mut(spec.ncols)
        .zip(mask.par_chunks_mut(spec.ncols))
        .enumerate()
        .for_each(|(row, (vrow, mrow))| {
            for col in 0..spec.ncols {
                let Some(center) = dem.get(row, col) else { continue };
                let mut sum = 0.0;
                let mut count = 0usize;
                for dr in -2..=2isize {
                    for dc in -2..=2isize {
                        let (r, c) = (row as isize + dr, col as isize + dc);
                        if r < 0 || r >= nrows || c < 0 || c >= ncols {
                            continue;
                        }
                        if let Some(v) = dem.get(r as usize, c as usize) {
                            sum += v - center;
                            count += 1;
                        }
                    }
                }
                vrow[col] = center + sum / count as f64;
                mrow[col] = true;
            }
        });
    Dem::from_parts(spec, values, mask)
}

/// Residual topography: the DEM minus its 5×5 focal mean, cellwise. NoData
/// propagates from the source.
pub fn residual_topography(dem: &Dem) -> Dem {
    let smoothed = focal_mean5(dem);
    let spec = dem.spec();
    let mut values = vec![f64::NAN; spec.len()];
    let mut mask = vec![false; spec.len()];
    values
        .par_chunks_mut(spec.ncols)
        .zip(mask.par_chunks_mut(spec.ncols))
        .enumerate()
        .for_each(|(row, (vrow, mrow))| {
            for col in 0..spec.ncols {
                if let (Some(z), Some(m)) = (dem.get(row, col), smoothed.get(row, col)) {
                    vrow[col] = z - m;
                    mrow[col] = true;
                }
            }
        });
    Dem::from_parts(spec, values, mask)
}
