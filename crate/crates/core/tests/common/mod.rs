//! Straightforward reference implementations shared by the integration
//! tests. Everything here is written as plainly as possible — textbook
//! means, full 3×3 normal equations, naive double loops — so that agreement
//! with the library is evidence of correctness rather than of shared code.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use roughmap::{Dem, GridSpec, RoughnessIndex};

/// Textbook two-pass sample standard deviation (n − 1 denominator).
pub fn naive_std(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    (ss / (n - 1.0)).sqrt()
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Sample standard deviation of residuals from the least-squares plane
/// z = a + b·x + c·y, solved through the full 3×3 normal equations with
/// Cramer's rule. Coordinates are shifted to window-local offsets first;
/// plane residuals are invariant under that translation.
pub fn naive_residual_std(pts: &[(f64, f64, f64)]) -> f64 {
    let (ox, oy) = (pts[0].0, pts[0].1);
    let n = pts.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let (mut sz, mut sxz, mut syz) = (0.0, 0.0, 0.0);
    for &(x, y, z) in pts {
        let (u, v) = (x - ox, y - oy);
        sx += u;
        sy += v;
        sxx += u * u;
        sxy += u * v;
        syy += v * v;
        sz += z;
        sxz += u * z;
        syz += v * z;
    }
    let det = det3([[n, sx, sy], [sx, sxx, sxy], [sy, sxy, syy]]);
    let a = det3([[sz, sx, sy], [sxz, sxx, sxy], [syz, sxy, syy]]) / det;
    let b = det3([[n, sz, sy], [sx, sxz, sxy], [sy, syz, syy]]) / det;
    let c = det3([[n, sx, sz], [sx, sxx, sxz], [sy, sxy, syz]]) / det;
    let residuals: Vec<f64> = pts
        .iter()
        .map(|&(x, y, z)| z - (a + b * (x - ox) + c * (y - oy)))
        .collect();
    naive_std(&residuals)
}

/// Neighbor lookup with the replication rule: positions outside the raster
/// or holding NoData take the window-center elevation.
fn z_or_center(dem: &Dem, row: i64, col: i64, center: f64) -> f64 {
    if row < 0 || col < 0 || row >= dem.nrows() as i64 || col >= dem.ncols() as i64 {
        return center;
    }
    dem.get(row as usize, col as usize).unwrap_or(center)
}

/// The 3×3 neighborhood around (row, col), row-major from the northwest
/// corner, with replication applied. None when the center itself is NoData.
fn window9(dem: &Dem, row: usize, col: usize) -> Option<[f64; 9]> {
    let center = dem.get(row, col)?;
    let (r, c) = (row as i64, col as i64);
    let mut z = [0.0; 9];
    let mut k = 0;
    for dr in -1..=1 {
        for dc in -1..=1 {
            z[k] = z_or_center(dem, r + dr, c + dc, center);
            k += 1;
        }
    }
    Some(z)
}

/// Slope of one 3×3 window, transcribed directly from the weighted
/// finite-difference formula (grouped differently from the library).
pub fn naive_slope_window(z: &[f64; 9], cell: f64) -> f64 {
    let dzdx = (z[2] - z[0] + 2.0 * (z[5] - z[3]) + z[8] - z[6]) / (8.0 * cell);
    let dzdy = (z[6] - z[0] + 2.0 * (z[7] - z[1]) + z[8] - z[2]) / (8.0 * cell);
    (dzdx.powi(2) + dzdy.powi(2)).sqrt().atan()
}

/// Curvature of one 3×3 window from the quadric-surface coefficients,
/// again grouped differently from the library.
pub fn naive_curvature_window(z: &[f64; 9], cell: f64) -> f64 {
    let d = (0.5 * (z[3] + z[5]) - z[4]) / (cell * cell);
    let e = (0.5 * (z[1] + z[7]) - z[4]) / (cell * cell);
    2.0 * (d + e)
}

pub fn naive_slope_map(dem: &Dem) -> Dem {
    per_cell_map(dem, naive_slope_window)
}

pub fn naive_curvature_map(dem: &Dem) -> Dem {
    per_cell_map(dem, naive_curvature_window)
}

fn per_cell_map(dem: &Dem, f: impl Fn(&[f64; 9], f64) -> f64) -> Dem {
    let spec = dem.spec();
    let mut out = Dem::constant(spec, 0.0);
    for row in 0..spec.nrows {
        for col in 0..spec.ncols {
            match window9(dem, row, col) {
                Some(z) => out.set(row, col, f(&z, spec.cell)),
                None => out.set_nodata(row, col),
            }
        }
    }
    out
}

/// Plain 5×5 focal mean: average of the in-raster valid cells, center
/// included, truncated at the edges.
pub fn naive_focal_mean5(dem: &Dem) -> Dem {
    let spec = dem.spec();
    let mut out = Dem::constant(spec, 0.0);
    for row in 0..spec.nrows {
        for col in 0..spec.ncols {
            if !dem.is_valid(row, col) {
                out.set_nodata(row, col);
                continue;
            }
            let mut sum = 0.0;
            let mut count = 0.0;
            for dr in -2i64..=2 {
                for dc in -2i64..=2 {
                    let (r, c) = (row as i64 + dr, col as i64 + dc);
                    if r < 0 || c < 0 || r >= spec.nrows as i64 || c >= spec.ncols as i64 {
                        continue;
                    }
                    if let Some(v) = dem.get(r as usize, c as usize) {
                        sum += v;
                        count += 1.0;
                    }
                }
            }
            out.set(row, col, sum / count);
        }
    }
    out
}

pub fn naive_residual_topography(dem: &Dem) -> Dem {
    let smoothed = naive_focal_mean5(dem);
    let spec = dem.spec();
    let mut out = Dem::constant(spec, 0.0);
    for row in 0..spec.nrows {
        for col in 0..spec.ncols {
            match (dem.get(row, col), smoothed.get(row, col)) {
                (Some(z), Some(m)) => out.set(row, col, z - m),
                _ => out.set_nodata(row, col),
            }
        }
    }
    out
}

/// Double-loop reference for the whole roughness pipeline at one scale:
/// derive the per-cell layer for the index, cut it into non-overlapping w×w
/// blocks from the northwest corner (southern and eastern remainders
/// dropped), and reduce each fully-valid block to its statistic.
pub fn naive_roughness(dem: &Dem, index: RoughnessIndex, w: usize) -> Dem {
    let spec = dem.spec();
    let brows = spec.nrows / w;
    let bcols = spec.ncols / w;
    let y0 = spec.y0 + (spec.nrows - brows * w) as f64 * spec.cell;
    let coarse = GridSpec::new(spec.x0, y0, bcols, brows, w as f64 * spec.cell).unwrap();
    let mut out = Dem::constant(coarse, 0.0);

    let layer = match index {
        RoughnessIndex::Rmsh | RoughnessIndex::Ldre => dem.clone(),
        RoughnessIndex::Rt => naive_residual_topography(dem),
        RoughnessIndex::Slope => naive_slope_map(dem),
        RoughnessIndex::Curvature => naive_curvature_map(dem),
    };

    for br in 0..brows {
        for bc in 0..bcols {
            let mut values = Vec::with_capacity(w * w);
            let mut pts = Vec::with_capacity(w * w);
            let mut complete = true;
            for row in br * w..(br + 1) * w {
                for col in bc * w..(bc + 1) * w {
                    match layer.get(row, col) {
                        Some(v) => {
                            values.push(v);
                            let x = spec.x0 + spec.cell * (col as f64 + 0.5);
                            let y = spec.y0 + spec.cell * ((spec.nrows - row) as f64 - 0.5);
                            pts.push((x, y, v));
                        }
                        None => complete = false,
                    }
                }
            }
            if !complete {
                out.set_nodata(br, bc);
            } else if index == RoughnessIndex::Ldre {
                out.set(br, bc, naive_residual_std(&pts));
            } else {
                out.set(br, bc, naive_std(&values));
            }
        }
    }
    out
}

/// Seeded random DEM; `nodata_per_mille` cells per thousand are masked.
pub fn random_dem(seed: u64, nrows: usize, ncols: usize, nodata_per_mille: u32) -> Dem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = GridSpec::new(0.0, 0.0, ncols, nrows, 1.0).unwrap();
    let mut dem = Dem::constant(spec, 0.0);
    for row in 0..nrows {
        for col in 0..ncols {
            if rng.random_range(0..1000) < nodata_per_mille {
                dem.set_nodata(row, col);
            } else {
                dem.set(row, col, rng.random_range(-2.0..2.0));
            }
        }
    }
    dem
}

/// Asserts cell-for-cell agreement: identical NoData pattern and values
/// within `tol`.
pub fn assert_grids_close(got: &Dem, want: &Dem, tol: f64, what: &str) {
    assert_eq!(got.nrows(), want.nrows(), "{what}: row count");
    assert_eq!(got.ncols(), want.ncols(), "{what}: column count");
    for row in 0..want.nrows() {
        for col in 0..want.ncols() {
            match (got.get(row, col), want.get(row, col)) {
                (Some(g), Some(v)) => assert!(
                    (g - v).abs() <= tol,
                    "{what} at ({row}, {col}): {g} vs {v} (diff {})",
                    (g - v).abs()
                ),
                (None, None) => {}
                (g, v) => panic!("{what} at ({row}, {col}): validity mismatch {g:?} vs {v:?}"),
            }
        }
    }
}
