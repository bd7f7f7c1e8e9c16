//! From scattered points to a regular grid: grid geometry, the DEM
//! container, Delaunay triangulation, and linear (barycentric) interpolation
//! sampled at cell centres.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pointcloud::{Point3, PointCloud};

/// Geometry of a north-up raster: `x0`,`y0` is the lower-left (south-west)
/// corner of the grid, `cell` the square cell edge in metres.
///
/// Row 0 is the northernmost row; the centre of cell (row, col) sits at
/// `(x0 + (col+0.5)·cell, y0 + (nrows−row−0.5)·cell)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x0: f64,
    pub y0: f64,
    pub ncols: usize,
    pub nrows: usize,
    pub cell: f64,
}

impl GridSpec {
    pub fn new(x0: f64, y0: f64, ncols: usize, nrows: usize, cell: f64) -> Result<GridSpec> {
        if !(x0.is_finite() && y0.is_finite()) {
            return Err(Error::InvalidParameter("grid origin must be finite".into()));
        }
        if !(cell.is_finite() && cell > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "cell size must be positive and finite, got {cell}"
            )));
        }
        if ncols == 0 || nrows == 0 {
            return Err(Error::InvalidParameter("grid must have at least one row and column".into()));
        }
        Ok(GridSpec { x0, y0, ncols, nrows, cell })
    }

    /// Map coordinates of the centre of cell (row, col).
    pub fn cell_center(&self, row: usize, col: usize) -> (f64, f64) {
        (
            self.x0 + (col as f64 + 0.5) * self.cell,
            self.y0 + (self.nrows as f64 - row as f64 - 0.5) * self.cell,
        )
    }

    /// Number of cells.
    pub fn len(&self) -> usize {
        self.ncols * self.nrows
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A gridded elevation model. Cells are either valid (finite value) or
/// NoData; NoData cells read back as `None` and store NaN internally.
#[derive(Debug, Clone)]
pub struct Dem {
    spec: GridSpec,
    values: Vec<f64>,
    mask: Vec<bool>,
}

impl Dem {
    /// Grid filled with one value, every cell valid.
    pub fn constant(spec: GridSpec, value: f64) -> Dem {
        Dem {
            values: vec![value; spec.len()],
            mask: vec![true; spec.len()],
            spec,
        }
    }

    /// Builds a grid from row-major values; NaN entries become NoData.
    pub fn from_values(spec: GridSpec, values: Vec<f64>) -> Result<Dem> {
        if values.len() != spec.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} values for a {}x{} grid",
                values.len(),
                spec.nrows,
                spec.ncols
            )));
        }
        let mask = values.iter().map(|v| v.is_finite()).collect();
        let values = values.iter().map(|v| if v.is_finite() { *v } else { f64::NAN }).collect();
        Ok(Dem { spec, values, mask })
    }

    pub(crate) fn from_parts(spec: GridSpec, values: Vec<f64>, mask: Vec<bool>) -> Dem {
        debug_assert_eq!(values.len(), spec.len());
        debug_assert_eq!(mask.len(), spec.len());
        Dem { spec, values, mask }
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn nrows(&self) -> usize {
        self.spec.nrows
    }

    pub fn ncols(&self) -> usize {
        self.spec.ncols
    }

    /// Cell edge length in metres.
    pub fn cell(&self) -> f64 {
        self.spec.cell
    }

    #[inline]
    fn idx(&self, row: usize, col: usize) -> usize {
        debug_assert!(row < self.spec.nrows && col < self.spec.ncols);
        row * self.spec.ncols + col
    }

    /// Value at (row, col), or `None` for NoData.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Option<f64> {
        let i = self.idx(row, col);
        if self.mask[i] {
            Some(self.values[i])
        } else {
            None
        }
    }

    #[inline]
    pub fn is_valid(&self, row: usize, col: usize) -> bool {
        self.mask[self.idx(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        let i = self.idx(row, col);
        self.values[i] = value;
        self.mask[i] = true;
    }

    pub fn set_nodata(&mut self, row: usize, col: usize) {
        let i = self.idx(row, col);
        self.values[i] = f64::NAN;
        self.mask[i] = false;
    }

    /// Number of valid cells.
    pub fn valid_count(&self) -> usize {
        self.mask.iter().filter(|m| **m).count()
    }

    /// Iterates valid cells as (row, col, value) in row-major order.
    pub fn valid_cells(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let ncols = self.spec.ncols;
        self.mask
            .iter()
            .enumerate()
            .filter(|&(_, &m)| m)
            .map(move |(i, _)| (i / ncols, i % ncols, self.values[i]))
    }

    /// Min and max over valid cells, `None` when the grid is all NoData.
    pub fn min_max(&self) -> Option<(f64, f64)> {
        let mut out: Option<(f64, f64)> = None;
        for (_, _, v) in self.valid_cells() {
            out = Some(match out {
                None => (v, v),
                Some((lo, hi)) => (lo.min(v), hi.max(v)),
            });
        }
        out
    }

    /// True when both grids have the same geometry, the same NoData pattern,
    /// and bit-identical values on valid cells. Used to verify that results
    /// do not depend on thread count or run order.
    pub fn bit_identical(&self, other: &Dem) -> bool {
        self.spec == other.spec
            && self.mask == other.mask
            && self
                .values
                .iter()
                .zip(&other.values)
                .zip(&self.mask)
                .all(|((a, b), m)| !m || a.to_bits() == b.to_bits())
    }
}

/// Triangulated irregular network over the cloud's horizontal locations.
#[derive(Debug, Clone)]
pub struct Tin {
    vertices: Vec<Point3>,
    triangles: Vec<[usize; 3]>,
}

impl Tin {
    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    /// Vertex indices per triangle, counter-clockwise.
    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }
}

/// Delaunay-triangulates the cloud in the horizontal plane.
///
/// Points sharing an (x, y) location are collapsed to a single vertex that
/// keeps the **last** elevation seen (a warning is logged). Fails when fewer
/// than three distinct locations remain or all of them are collinear.
pub fn delaunay(cloud: &PointCloud) -> Result<Tin> {
    use std::collections::HashMap;

    let mut vertices: Vec<Point3> = Vec::with_capacity(cloud.len());
    let mut seen: HashMap<(u64, u64), usize> = HashMap::with_capacity(cloud.len());
    let mut duplicates = 0usize;
    for p in cloud.points() {
        // +0.0 folds -0.0 onto 0.0 so the key matches coordinate equality.
        let key = ((p.x + 0.0).to_bits(), (p.y + 0.0).to_bits());
        match seen.entry(key) {
            std::collections::hash_map::Entry::Occupied(e) => {
                vertices[*e.get()].z = p.z;
                duplicates += 1;
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(vertices.len());
                vertices.push(*p);
            }
        }
    }
    if duplicates > 0 {
        log::warn!("collapsed {duplicates} duplicate planimetric point(s); kept the last elevation at each location");
    }
    if vertices.len() < 3 {
        return Err(Error::DegenerateGeometry(format!(
            "triangulation needs at least three distinct locations, got {}",
            vertices.len()
        )));
    }

    let sites: Vec<delaunator::Point> =
        vertices.iter().map(|p| delaunator::Point { x: p.x, y: p.y }).collect();
    let tri = delaunator::triangulate(&sites);
    if tri.triangles.is_empty() {
        return Err(Error::DegenerateGeometry(
            "all point locations are collinear; no triangulation exists".into(),
        ));
    }

    let mut triangles = Vec::with_capacity(tri.triangles.len() / 3);
    for t in tri.triangles.chunks_exact(3) {
        let (a, mut b, mut c) = (t[0], t[1], t[2]);
        let (pa, pb, pc) = (&vertices[a], &vertices[b], &vertices[c]);
        let area2 = (pb.x - pa.x) * (pc.y - pa.y) - (pb.y - pa.y) * (pc.x - pa.x);
        if area2 == 0.0 {
            // Exactly collinear sliver; contributes no area, so drop it.
            continue;
        }
        if area2 < 0.0 {
            std::mem::swap(&mut b, &mut c);
        }
        triangles.push([a, b, c]);
    }
    if triangles.is_empty() {
        return Err(Error::DegenerateGeometry(
            "triangulation produced no usable triangles".into(),
        ));
    }
    Ok(Tin { vertices, triangles })
}

/// Grid covering the cloud's horizontal bounding box: origin at the
/// south-west corner, `ceil(extent / cell)` columns/rows (at least one each).
pub fn make_grid_spec(cloud: &PointCloud, cell: f64) -> Result<GridSpec> {
    if !(cell.is_finite() && cell > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "cell size must be positive and finite, got {cell}"
        )));
    }
    let b = cloud.bounds();
    let ncols = ((b.width() / cell).ceil() as usize).max(1);
    let nrows = ((b.height() / cell).ceil() as usize).max(1);
    GridSpec::new(b.xmin, b.ymin, ncols, nrows, cell)
}

/// Twice the signed area of triangle (a, b, p); positive when p lies to the
/// left of a→b.
#[inline]
fn cross(ax: f64, ay: f64, bx: f64, by: f64, px: f64, py: f64) -> f64 {
    (bx - ax) * (py - ay) - (by - ay) * (px - ax)
}

/// How far outside a triangle a point may fall (as a fraction of triangle
/// area) and still be attributed to it. Rescues cell centres that sit on a
/// hull edge but land a few ulps outside due to rounding.
const BARY_SLACK: f64 = 1e-12;

/// Samples the TIN at every cell centre by linear interpolation on the
/// containing triangle. Centres outside the convex hull become NoData.
///
/// A centre on a shared edge or vertex takes the same value regardless of
/// which incident triangle claims it (the interpolant is continuous); ties
/// go to the lowest triangle index, so output is fully deterministic.
pub fn interpolate_grid(tin: &Tin, spec: &GridSpec) -> Dem {
    let verts = tin.vertices();
    let tris = tin.triangles();

    // Bounding box of the TIN, for quick rejection and bin sizing.
    let (mut xmin, mut ymin) = (f64::INFINITY, f64::INFINITY);
    let (mut xmax, mut ymax) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for v in verts {
        xmin = xmin.min(v.x);
        xmax = xmax.max(v.x);
        ymin = ymin.min(v.y);
        ymax = ymax.max(v.y);
    }

    // Uniform bins over the bbox; each triangle is filed under every bin its
    // own bbox touches, in index order.
    let nbins = (((tris.len() as f64 / 2.0).sqrt().ceil()) as usize).clamp(1, 1024);
    let (w, h) = (xmax - xmin, ymax - ymin);
    let bw = if w > 0.0 { w / nbins as f64 } else { 1.0 };
    let bh = if h > 0.0 { h / nbins as f64 } else { 1.0 };
    let bin_x = |x: f64| -> usize { (((x - xmin) / bw).floor() as isize).clamp(0, nbins as isize - 1) as usize };
    let bin_y = |y: f64| -> usize { (((y - ymin) / bh).floor() as isize).clamp(0, nbins as isize - 1) as usize };
    let mut bins: Vec<Vec<u32>> = vec![Vec::new(); nbins * nbins];
    for (t, tri) in tris.iter().enumerate() {
        let (a, b, c) = (&verts[tri[0]], &verts[tri[1]], &verts[tri[2]]);
        let (bx0, bx1) = (bin_x(a.x.min(b.x).min(c.x)), bin_x(a.x.max(b.x).max(c.x)));
        let (by0, by1) = (bin_y(a.y.min(b.y).min(c.y)), bin_y(a.y.max(b.y).max(c.y)));
        for by in by0..=by1 {
            for bx in bx0..=bx1 {
                bins[by * nbins + bx].push(t as u32);
            }
        }
    }

    let margin = 1e-9 * w.max(h).max(1.0);
    let sample = |x: f64, y: f64| -> Option<f64> {
        if x < xmin - margin || x > xmax + margin || y < ymin - margin || y > ymax + margin {
            return None;
        }
        let candidates = &bins[bin_y(y) * nbins + bin_x(x)];
        let mut fallback: Option<(f64, usize)> = None; // (worst normalized coord, tri)
        for &t in candidates {
            let tri = &tris[t as usize];
            let (a, b, c) = (&verts[tri[0]], &verts[tri[1]], &verts[tri[2]]);
            if x == a.x && y == a.y {
                return Some(a.z);
            }
            if x == b.x && y == b.y {
                return Some(b.z);
            }
            if x == c.x && y == c.y {
                return Some(c.z);
            }
            let wa = cross(b.x, b.y, c.x, c.y, x, y);
            let wb = cross(c.x, c.y, a.x, a.y, x, y);
            let wc = cross(a.x, a.y, b.x, b.y, x, y);
            if wa >= 0.0 && wb >= 0.0 && wc >= 0.0 {
                return Some(interpolate_in(a, b, c, wa, wb, wc));
            }
            let area2 = wa + wb + wc;
            if area2 > 0.0 {
                let worst = wa.min(wb).min(wc) / area2;
                if fallback.is_none_or(|(best, _)| worst > best) {
                    fallback = Some((worst, t as usize));
                }
            }
        }
        match fallback {
            Some((worst, t)) if worst >= -BARY_SLACK => {
                let tri = &tris[t];
                let (a, b, c) = (&verts[tri[0]], &verts[tri[1]], &verts[tri[2]]);
                let wa = cross(b.x, b.y, c.x, c.y, x, y);
                let wb = cross(c.x, c.y, a.x, a.y, x, y);
                let wc = cross(a.x, a.y, b.x, b.y, x, y);
                Some(interpolate_in(a, b, c, wa, wb, wc))
            }
            _ => None,
        }
    };

    let ncols = spec.ncols;
    let mut values = vec![f64::NAN; spec.len()];
    let mut mask = vec![false; spec.len()];
    values
        .par_chunks_mut(ncols)
        .zip(mask.par_chunks_mut(ncols))
        .enumerate()
        .for_each(|(row, (vrow, mrow))| {
            for col in 0..ncols {
                let (x, y) = spec.cell_center(row, col);
                if let Some(z) = sample(x, y) {
                    vrow[col] = z;
                    mrow[col] = true;
                }
            }
        });
    Dem::from_parts(*spec, values, mask)
}

/// Barycentric interpolation, clamped to the triangle's elevation range so a
/// sample can never overshoot its three corners.
#[inline]
fn interpolate_in(a: &Point3, b: &Point3, c: &Point3, wa: f64, wb: f64, wc: f64) -> f64 {
    let z = (wa * a.z + wb * b.z + wc * c.z) / (wa + wb + wc);
    let lo = a.z.min(b.z).min(c.z);
    let hi = a.z.max(b.z).max(c.z);
    z.clamp(lo, hi)
}
