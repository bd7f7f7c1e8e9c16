//! The five local roughness indices — RMSH, LDRE, RT, SLOPE, CURVATURE —
//! computed over non-overlapping w×w windows of a DEM, one coarse map per
//! index and scale.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gridding::{Dem, GridSpec};
use crate::pointcloud::{fit_centered, Point3};
use crate::raster::{curvature_map, residual_topography, slope_map};

/// Which local roughness measure a map carries.
///
/// * `Rmsh` — standard deviation of window elevations;
/// * `Ldre` — standard deviation of residuals after a per-window plane fit;
/// * `Rt` — standard deviation of residual topography (DEM − 5×5 focal mean);
/// * `Slope` — standard deviation of the 3×3 slope map;
/// * `Curvature` — standard deviation of the 3×3 curvature map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RoughnessIndex {
    Rmsh,
    Ldre,
    Rt,
    Slope,
    Curvature,
}

impl RoughnessIndex {
    /// All five indices in canonical order (also the matrix row order).
    pub const ALL: [RoughnessIndex; 5] = [
        RoughnessIndex::Rmsh,
        RoughnessIndex::Ldre,
        RoughnessIndex::Rt,
        RoughnessIndex::Slope,
        RoughnessIndex::Curvature,
    ];

    /// Canonical upper-case label, used in CSV headers.
    pub fn label(self) -> &'static str {
        match self {
            RoughnessIndex::Rmsh => "RMSH",
            RoughnessIndex::Ldre => "LDRE",
            RoughnessIndex::Rt => "RT",
            RoughnessIndex::Slope => "SLOPE",
            RoughnessIndex::Curvature => "CURVATURE",
        }
    }

    /// Lower-case tag used in file names (`<stem>_<tag>_w<w>.asc`).
    pub fn tag(self) -> &'static str {
        match self {
            RoughnessIndex::Rmsh => "rmsh",
            RoughnessIndex::Ldre => "ldre",
            RoughnessIndex::Rt => "rt",
            RoughnessIndex::Slope => "slope",
            RoughnessIndex::Curvature => "curvature",
        }
    }
}

impl fmt::Display for RoughnessIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for RoughnessIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "RMSH" => Ok(RoughnessIndex::Rmsh),
            "LDRE" => Ok(RoughnessIndex::Ldre),
            "RT" => Ok(RoughnessIndex::Rt),
            "SLOPE" => Ok(RoughnessIndex::Slope),
            "CURVATURE" => Ok(RoughnessIndex::Curvature),
            other => Err(Error::InvalidParameter(format!(
                "unknown roughness index {other:?} (expected rmsh, ldre, rt, slope or curvature)"
            ))),
        }
    }
}

/// Window side length in cells: odd and at least 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WindowScale(usize);

impl WindowScale {
    /// The survey set of scales: 3, 5, 7, 9, 11.
    pub const DEFAULT: [WindowScale; 5] = [
        WindowScale(3),
        WindowScale(5),
        WindowScale(7),
        WindowScale(9),
        WindowScale(11),
    ];

    pub fn new(w: usize) -> Result<WindowScale> {
        if w < 3 || w.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "window scale must be odd and at least 3, got {w}"
            )));
        }
        Ok(WindowScale(w))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl fmt::Display for WindowScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One roughness index evaluated per w×w tile: a coarse grid with cell size
/// w·L whose valid values are all ≥ 0.
#[derive(Debug, Clone)]
pub struct RoughnessMap {
    pub index: RoughnessIndex,
    pub scale: WindowScale,
    pub grid: Dem,
}

/// Sample standard deviation (n−1 denominator).
///
/// Two-pass with the data shifted by its first value: mathematically the
/// textbook formula, but a constant sample comes out exactly 0.0 instead of
/// accumulating rounding noise.
pub fn window_std(values: &[f64]) -> Result<f64> {
    let n = values.len();
    if n < 2 {
        return Err(Error::InsufficientData(format!(
            "standard deviation needs at least two values, got {n}"
        )));
    }
    let shift = values[0];
    let mut sum = 0.0;
    for v in values {
        sum += v - shift;
    }
    let mean = sum / n as f64;
    let mut ss = 0.0;
    for v in values {
        let d = (v - shift) - mean;
        ss += d * d;
    }
    Ok((ss / (n - 1) as f64).sqrt())
}

/// RMSH of a window: sqrt( Σ(Zi − Z̄)² / (n−1) ) — the sample standard
/// deviation of the elevations.
pub fn rmsh(values: &[f64]) -> Result<f64> {
    window_std(values)
}

/// LDRE of a window: fits a least-squares plane to the cells and returns the
/// sample standard deviation (n−1) of the vertical residuals.
///
/// Needs at least four cells with non-collinear horizontal locations.
pub fn ldre(cells: &[Point3]) -> Result<f64> {
    if cells.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "plane-detrended roughness needs at least four cells, got {}",
            cells.len()
        )));
    }
    let plane = fit_centered(cells)?;
    let residuals: Vec<f64> = cells.iter().map(|p| plane.residual(p)).collect();
    window_std(&residuals)
}

/// Computes one roughness index over non-overlapping w×w tiles.
///
/// Tiling starts at the north-west corner; partial tiles at the south and
/// east edges are discarded, so the coarse map is floor(R/w) × floor(C/w)
/// cells of size w·L, sharing the DEM's west edge (the south edge moves up
/// by the dropped remainder). A tile containing any NoData cell is NoData.
///
/// RT, SLOPE and CURVATURE first derive their layer over the whole DEM
/// (residual topography, slope, curvature respectively), then take the
/// per-tile standard deviation of that layer; RMSH and LDRE work on the
/// elevations directly.
pub fn roughness_map(dem: &Dem, index: RoughnessIndex, scale: WindowScale) -> Result<RoughnessMap> {
    let w = scale.get();
    let spec = dem.spec();
    if spec.nrows < w || spec.ncols < w {
        return Err(Error::InsufficientExtent { nrows: spec.nrows, ncols: spec.ncols, w });
    }
    let brows = spec.nrows / w;
    let bcols = spec.ncols / w;
    let coarse = GridSpec::new(
        spec.x0,
        spec.y0 + (spec.nrows - brows * w) as f64 * spec.cell,
        bcols,
        brows,
        w as f64 * spec.cell,
    )?;

    // Whole-raster derived layer, where the index calls for one.
    let derived = match index {
        RoughnessIndex::Rmsh | RoughnessIndex::Ldre => None,
        RoughnessIndex::Rt => Some(residual_topography(dem)),
        RoughnessIndex::Slope => Some(slope_map(dem)),
        RoughnessIndex::Curvature => Some(curvature_map(dem)),
    };
    let layer = derived.as_ref().unwrap_or(dem);

    let mut values = vec![f64::NAN; coarse.len()];
    let mut mask = vec![false; coarse.len()];
    values
        .par_chunks_mut(bcols)
        .zip(mask.par_chunks_mut(bcols))
        .enumerate()
        .for_each(|(br, (vrow, mrow))| {
            let mut samples: Vec<f64> = Vec::with_capacity(w * w);
            let mut cells: Vec<Point3> = Vec::with_capacity(w * w);
            'tiles: for bc in 0..bcols {
                samples.clear();
                cells.clear();
                for r in br * w..(br + 1) * w {
                    for c in bc * w..(bc + 1) * w {
                        let Some(v) = layer.get(r, c) else {
                            continue 'tiles; // tile poisoned by NoData
                        };
                        if index == RoughnessIndex::Ldre {
                            let (x, y) = spec.cell_center(r, c);
                            cells.push(Point3::new(x, y, v));
                        } else {
                            samples.push(v);
                        }
                    }
                }
                let stat = if index == RoughnessIndex::Ldre {
                    ldre(&cells)
                } else {
                    window_std(&samples)
                };
                // A full w×w tile (w ≥ 3) always has enough non-collinear cells.
                vrow[bc] = stat.expect("full tiles are never degenerate");
                mrow[bc] = true;
            }
        });

    Ok(RoughnessMap {
        index,
        scale,
        grid: Dem::from_parts(coarse, values, mask),
    })
}

/// Rescales valid values linearly onto [0, 1]: (v − min)/(max − min), or all
/// zeros when the map is constant. Fails on an all-NoData map.
pub fn normalize01(map: &RoughnessMap) -> Result<RoughnessMap> {
    let (lo, hi) = map.grid.min_max().ok_or(Error::EmptyMap)?;
    let spec = map.grid.spec();
    let mut grid = map.grid.clone();
    for row in 0..spec.nrows {
        for col in 0..spec.ncols {
            if let Some(v) = map.grid.get(row, col) {
                let t = if hi > lo { (v - lo) / (hi - lo) } else { 0.0 };
                grid.set(row, col, t);
            }
        }
    }
    Ok(RoughnessMap { index: map.index, scale: map.scale, grid })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn scale(w: usize) -> WindowScale {
        WindowScale::new(w).unwrap()
    }

    /// Textbook two-pass standard deviation, no shifting.
    fn std_oracle(values: &[f64]) -> f64 {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        (ss / (n - 1.0)).sqrt()
    }

    fn random_dem(seed: u64, nrows: usize, ncols: usize) -> Dem {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = GridSpec::new(0.0, 0.0, ncols, nrows, 1.0).unwrap();
        let values = (0..spec.len()).map(|_| rng.random_range(0.0..2.0)).collect();
        Dem::from_values(spec, values).unwrap()
    }

    fn plane_dem(nrows: usize, ncols: usize, b0: f64, b1: f64, b2: f64) -> Dem {
        let spec = GridSpec::new(0.0, 0.0, ncols, nrows, 1.0).unwrap();
        let mut dem = Dem::constant(spec, 0.0);
        for row in 0..nrows {
            for col in 0..ncols {
                let (x, y) = spec.cell_center(row, col);
                dem.set(row, col, b0 + b1 * x + b2 * y);
            }
        }
        dem
    }

    #[test]
    fn window_scale_accepts_odd_and_rejects_the_rest() {
        assert_eq!(scale(3).get(), 3);
        assert_eq!(scale(11).get(), 11);
        assert_eq!(scale(13).get(), 13, "larger odd scales are allowed");
        assert!(WindowScale::new(2).is_err());
        assert!(WindowScale::new(4).is_err());
        assert!(WindowScale::new(1).is_err());
        assert!(WindowScale::new(0).is_err());
        assert_eq!(WindowScale::DEFAULT.map(WindowScale::get), [3, 5, 7, 9, 11]);
    }

    #[test]
    fn index_labels_round_trip() {
        for idx in RoughnessIndex::ALL {
            assert_eq!(idx.label().parse::<RoughnessIndex>().unwrap(), idx);
            assert_eq!(idx.tag().parse::<RoughnessIndex>().unwrap(), idx);
        }
        assert!("bumpiness".parse::<RoughnessIndex>().is_err());
    }

    #[test]
    fn std_of_constant_sample_is_exactly_zero() {
        assert_eq!(window_std(&[0.1; 4]).unwrap(), 0.0);
        assert_eq!(rmsh(&[123.456; 9]).unwrap(), 0.0);
        assert_eq!(window_std(&[0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn rmsh_hand_example() {
        let got = rmsh(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        let want = (5.0f64 / 3.0).sqrt();
        assert!((got - want).abs() < 1e-15, "{got} vs {want}");
    }

    #[test]
    fn window_std_hand_example() {
        assert_eq!(window_std(&[-1.0, 1.0]).unwrap(), 2.0f64.sqrt());
    }

    #[test]
    fn std_matches_two_pass_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..500 {
            let n = rng.random_range(2..50);
            let values: Vec<f64> = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
            let got = window_std(&values).unwrap();
            let want = std_oracle(&values);
            assert!((got - want).abs() <= 1e-12 * want.max(1.0), "{got} vs {want}");
        }
    }

    #[test]
    fn rmsh_is_shift_invariant_on_exact_input() {
        let base = [1.0, 5.0, 2.0, 8.0];
        let shifted = [11.0, 15.0, 12.0, 18.0];
        assert_eq!(rmsh(&base).unwrap(), rmsh(&shifted).unwrap());
    }

    #[test]
    fn std_is_permutation_invariant_on_exact_input() {
        let a = rmsh(&[1.0, 5.0, 2.0, 8.0]).unwrap();
        let b = rmsh(&[8.0, 2.0, 5.0, 1.0]).unwrap();
        let c = rmsh(&[2.0, 8.0, 1.0, 5.0]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn std_rejects_tiny_samples() {
        assert!(matches!(window_std(&[1.0]), Err(Error::InsufficientData(_))));
        assert!(matches!(rmsh(&[]), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn ldre_of_exact_plane_is_zero() {
        let mut cells = Vec::new();
        for row in 0..3 {
            for col in 0..3 {
                let (x, y) = (col as f64, row as f64);
                cells.push(Point3::new(x, y, 1.0 + 0.5 * x - 0.25 * y));
            }
        }
        assert!(ldre(&cells).unwrap() <= 1e-12);
    }

    #[test]
    fn ldre_parabola_matches_least_squares_oracle() {
        // z = x² on x ∈ {−1, 0, 1}, three rows: the best plane is z = 2/3,
        // residuals ±1/3 and ∓2/3, std = sqrt(2/8) = 0.5.
        let mut cells = Vec::new();
        for y in [-1.0, 0.0, 1.0] {
            for x in [-1.0f64, 0.0, 1.0] {
                cells.push(Point3::new(x, y, x * x));
            }
        }
        let got = ldre(&cells).unwrap();
        assert!((got - 0.5).abs() <= 1e-12, "{got}");
    }

    #[test]
    fn ldre_never_exceeds_rmsh() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..1000 {
            let mut cells = Vec::new();
            let mut zs = Vec::new();
            for row in 0..3 {
                for col in 0..3 {
                    let z = rng.random_range(-1.0..1.0);
                    cells.push(Point3::new(col as f64, row as f64, z));
                    zs.push(z);
                }
            }
            let l = ldre(&cells).unwrap();
            let r = rmsh(&zs).unwrap();
            assert!(l <= r + 1e-12, "ldre {l} > rmsh {r}");
        }
    }

    #[test]
    fn ldre_input_validation() {
        let line: Vec<Point3> = (0..5).map(|i| Point3::new(i as f64, 2.0 * i as f64, 1.0)).collect();
        assert!(matches!(ldre(&line), Err(Error::DegenerateGeometry(_))));
        let few = [Point3::new(0.0, 0.0, 0.0), Point3::new(1.0, 0.0, 0.0), Point3::new(0.0, 1.0, 0.0)];
        assert!(matches!(ldre(&few), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn tiling_arithmetic_and_georeferencing() {
        let dem = random_dem(1, 6, 6);
        let map = roughness_map(&dem, RoughnessIndex::Rmsh, scale(3)).unwrap();
        let g = map.grid.spec();
        assert_eq!((g.nrows, g.ncols), (2, 2));
        assert_eq!(g.cell, 3.0);
        assert_eq!((g.x0, g.y0), (0.0, 0.0), "6 = 2·3 leaves no remainder");

        // 7×7 at w=3 drops one southern row and one eastern column.
        let dem = random_dem(2, 7, 7);
        let map = roughness_map(&dem, RoughnessIndex::Rmsh, scale(3)).unwrap();
        let g = map.grid.spec();
        assert_eq!((g.nrows, g.ncols), (2, 2));
        assert_eq!(g.x0, 0.0, "tiles keep the west edge");
        assert_eq!(g.y0, 1.0, "dropped southern remainder lifts the origin");
    }

    #[test]
    fn undersized_dem_is_rejected() {
        let dem = random_dem(3, 4, 4);
        assert!(matches!(
            roughness_map(&dem, RoughnessIndex::Rmsh, scale(5)),
            Err(Error::InsufficientExtent { .. })
        ));
    }

    #[test]
    fn constant_dem_yields_exactly_zero_maps_for_all_indices() {
        let dem = Dem::constant(GridSpec::new(0.0, 0.0, 15, 15, 1.0).unwrap(), 2.375);
        for idx in RoughnessIndex::ALL {
            for w in [3, 5] {
                let map = roughness_map(&dem, idx, scale(w)).unwrap();
                assert!(map.grid.valid_count() > 0);
                for (_, _, v) in map.grid.valid_cells() {
                    assert_eq!(v, 0.0, "{idx} at w={w} must be exactly zero");
                }
            }
        }
    }

    #[test]
    fn nodata_poisons_exactly_its_tile() {
        let mut dem = random_dem(4, 9, 9);
        dem.set_nodata(4, 4); // center tile of the 3×3 tiling
        for idx in RoughnessIndex::ALL {
            let map = roughness_map(&dem, idx, scale(3)).unwrap();
            assert!(!map.grid.is_valid(1, 1), "{idx}: poisoned tile must be NoData");
            assert_eq!(map.grid.valid_count(), 8, "{idx}: other tiles stay valid");
        }
    }

    #[test]
    fn all_roughness_values_are_non_negative() {
        let dem = random_dem(5, 22, 22);
        for idx in RoughnessIndex::ALL {
            let map = roughness_map(&dem, idx, scale(3)).unwrap();
            for (_, _, v) in map.grid.valid_cells() {
                assert!(v >= 0.0);
            }
        }
    }

    #[test]
    fn vertical_scaling_is_equivariant_except_for_slope() {
        let dem = random_dem(6, 20, 20);
        let k = 2.7;
        let spec = dem.spec();
        let mut scaled = Dem::constant(spec, 0.0);
        for (r, c, v) in dem.valid_cells() {
            scaled.set(r, c, k * v);
        }
        for idx in [RoughnessIndex::Rmsh, RoughnessIndex::Ldre, RoughnessIndex::Rt, RoughnessIndex::Curvature] {
            let base = roughness_map(&dem, idx, scale(5)).unwrap();
            let big = roughness_map(&scaled, idx, scale(5)).unwrap();
            for ((_, _, a), (_, _, b)) in base.grid.valid_cells().zip(big.grid.valid_cells()) {
                assert!(
                    (b - k * a).abs() <= 1e-12 * (k * a).abs().max(1e-300),
                    "{idx}: {b} vs {}",
                    k * a
                );
            }
        }
        // Slope roughness is not equivariant: atan is nonlinear.
        let base = roughness_map(&dem, RoughnessIndex::Slope, scale(5)).unwrap();
        let big = roughness_map(&scaled, RoughnessIndex::Slope, scale(5)).unwrap();
        let mut any_differs = false;
        for ((_, _, a), (_, _, b)) in base.grid.valid_cells().zip(big.grid.valid_cells()) {
            if (b - k * a).abs() > 1e-6 * (k * a).abs() {
                any_differs = true;
            }
        }
        assert!(any_differs, "slope roughness scaled linearly — atan nonlinearity lost");
    }

    #[test]
    fn vertical_shift_leaves_all_maps_unchanged() {
        let dem = random_dem(7, 18, 18);
        let spec = dem.spec();
        let mut lifted = Dem::constant(spec, 0.0);
        for (r, c, v) in dem.valid_cells() {
            lifted.set(r, c, v + 100.0);
        }
        for idx in RoughnessIndex::ALL {
            let a = roughness_map(&dem, idx, scale(3)).unwrap();
            let b = roughness_map(&lifted, idx, scale(3)).unwrap();
            for ((_, _, x), (_, _, y)) in a.grid.valid_cells().zip(b.grid.valid_cells()) {
                assert!((x - y).abs() <= 1e-12, "{idx}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn normalization_aligns_scaled_maps() {
        let dem = random_dem(8, 20, 20);
        let spec = dem.spec();
        let mut scaled = Dem::constant(spec, 0.0);
        for (r, c, v) in dem.valid_cells() {
            scaled.set(r, c, 3.25 * v);
        }
        for idx in [RoughnessIndex::Rmsh, RoughnessIndex::Ldre, RoughnessIndex::Rt, RoughnessIndex::Curvature] {
            let a = normalize01(&roughness_map(&dem, idx, scale(5)).unwrap()).unwrap();
            let b = normalize01(&roughness_map(&scaled, idx, scale(5)).unwrap()).unwrap();
            for ((_, _, x), (_, _, y)) in a.grid.valid_cells().zip(b.grid.valid_cells()) {
                assert!((x - y).abs() <= 1e-12, "{idx}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn tilted_plane_separates_rmsh_from_the_rest() {
        let dem = plane_dem(20, 20, 1.0, 0.3, 0.2);
        let w = 3;
        for idx in RoughnessIndex::ALL {
            let map = roughness_map(&dem, idx, scale(w)).unwrap();
            let g = map.grid.spec();
            for row in 0..g.nrows {
                for col in 0..g.ncols {
                    // Tiles whose cells sit ≥ 2 cells from every DEM edge see
                    // only symmetric neighborhoods.
                    let interior = row * w >= 2
                        && col * w >= 2
                        && (row + 1) * w <= dem.nrows() - 2
                        && (col + 1) * w <= dem.ncols() - 2;
                    if !interior {
                        continue;
                    }
                    let v = map.grid.get(row, col).unwrap();
                    if idx == RoughnessIndex::Rmsh {
                        assert!(v > 0.0, "RMSH sees the in-tile trend");
                    } else {
                        assert!(v <= 1e-9, "{idx} interior tile = {v}");
                    }
                }
            }
        }
    }

    #[test]
    fn normalize01_hand_examples() {
        let spec = GridSpec::new(0.0, 0.0, 3, 1, 1.0).unwrap();
        let map = RoughnessMap {
            index: RoughnessIndex::Rmsh,
            scale: scale(3),
            grid: Dem::from_values(spec, vec![2.0, 4.0, 6.0]).unwrap(),
        };
        let norm = normalize01(&map).unwrap();
        assert_eq!(norm.grid.get(0, 0), Some(0.0));
        assert_eq!(norm.grid.get(0, 1), Some(0.5));
        assert_eq!(norm.grid.get(0, 2), Some(1.0));

        let flat = RoughnessMap {
            index: RoughnessIndex::Rt,
            scale: scale(3),
            grid: Dem::constant(spec, 7.5),
        };
        let norm = normalize01(&flat).unwrap();
        for (_, _, v) in norm.grid.valid_cells() {
            assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn normalize01_spans_the_unit_interval() {
        let dem = random_dem(10, 24, 24);
        let map = roughness_map(&dem, RoughnessIndex::Rmsh, scale(3)).unwrap();
        let norm = normalize01(&map).unwrap();
        let (lo, hi) = norm.grid.min_max().unwrap();
        assert_eq!(lo, 0.0);
        assert_eq!(hi, 1.0);
    }

    #[test]
    fn normalize01_rejects_empty_maps() {
        let spec = GridSpec::new(0.0, 0.0, 2, 2, 1.0).unwrap();
        let map = RoughnessMap {
            index: RoughnessIndex::Rmsh,
            scale: scale(3),
            grid: Dem::from_values(spec, vec![f64::NAN; 4]).unwrap(),
        };
        assert!(matches!(normalize01(&map), Err(Error::EmptyMap)));
    }

    #[test]
    fn roughness_maps_do_not_depend_on_thread_count() {
        let dem = random_dem(11, 33, 33);
        let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let eight = rayon::ThreadPoolBuilder::new().num_threads(8).build().unwrap();
        for idx in RoughnessIndex::ALL {
            let a = single.install(|| roughness_map(&dem, idx, scale(5)).unwrap());
            let b = eight.install(|| roughness_map(&dem, idx, scale(5)).unwrap());
            assert!(a.grid.bit_identical(&b.grid), "{idx}");
        }
    }
}
