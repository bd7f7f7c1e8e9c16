//! Scattered terrain points: XYZ text I/O, nearest-neighbour spacing, and
//! least-squares plane fitting / detrending.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// One survey point. All three coordinates are finite (enforced by
/// [`PointCloud::new`] and the XYZ reader).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }
}

/// Componentwise min/max of a point set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub zmin: f64,
    pub zmax: f64,
}

impl Bounds {
    fn of(points: &[Point3]) -> Bounds {
        let mut b = Bounds {
            xmin: f64::INFINITY,
            xmax: f64::NEG_INFINITY,
            ymin: f64::INFINITY,
            ymax: f64::NEG_INFINITY,
            zmin: f64::INFINITY,
            zmax: f64::NEG_INFINITY,
        };
        for p in points {
            b.xmin = b.xmin.min(p.x);
            b.xmax = b.xmax.max(p.x);
            b.ymin = b.ymin.min(p.y);
            b.ymax = b.ymax.max(p.y);
            b.zmin = b.zmin.min(p.z);
            b.zmax = b.zmax.max(p.z);
        }
        b
    }

    /// Horizontal extent (xmax − xmin).
    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    /// Horizontal extent (ymax − ymin).
    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }
}

/// An unordered set of survey points with cached bounds.
#[derive(Debug, Clone)]
pub struct PointCloud {
    points: Vec<Point3>,
    bounds: Bounds,
}

impl PointCloud {
    /// Builds a cloud, rejecting empty input and non-finite coordinates.
    pub fn new(points: Vec<Point3>) -> Result<PointCloud> {
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        for (index, p) in points.iter().enumerate() {
            if !(p.x.is_finite() && p.y.is_finite() && p.z.is_finite()) {
                return Err(Error::NonFinite { index });
            }
        }
        let bounds = Bounds::of(&points);
        Ok(PointCloud { points, bounds })
    }

    /// Internal constructor for points already known to be finite.
    fn from_checked(points: Vec<Point3>) -> PointCloud {
        let bounds = Bounds::of(&points);
        PointCloud { points, bounds }
    }

    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Reads whitespace-delimited `x y z` records. Blank lines are skipped and
/// `#` starts a comment that runs to the end of the line.
pub fn load_xyz<R: BufRead>(reader: R) -> Result<PointCloud> {
    let mut points = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let data = line.split('#').next().unwrap_or("").trim();
        if data.is_empty() {
            continue;
        }
        let fields: Vec<&str> = data.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected 3 fields (x y z), got {}", fields.len()),
            });
        }
        let mut coords = [0.0f64; 3];
        for (c, field) in coords.iter_mut().zip(&fields) {
            *c = field.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("not a number: {field:?}"),
            })?;
            if !c.is_finite() {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("non-finite coordinate: {field:?}"),
                });
            }
        }
        points.push(Point3::new(coords[0], coords[1], coords[2]));
    }
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(PointCloud::from_checked(points))
}

/// Writes one `x y z` record per line using shortest round-trip decimal
/// formatting, so reading the file back reproduces the coordinates exactly.
pub fn write_xyz<W: Write>(cloud: &PointCloud, mut writer: W) -> std::io::Result<()> {
    for p in cloud.points() {
        writeln!(writer, "{} {} {}", p.x, p.y, p.z)?;
    }
    Ok(())
}

/// Mean over all points of the horizontal distance to the nearest other
/// point. Needs at least two points; duplicate locations contribute zero.
///
/// Uses a uniform bucket grid with an expanding-ring search, so it stays
/// near-linear on survey-sized clouds.
pub fn mean_spacing(cloud: &PointCloud) -> Result<f64> {
    let pts = cloud.points();
    let n = pts.len();
    if n < 2 {
        return Err(Error::InsufficientData(
            "mean spacing needs at least two points".into(),
        ));
    }

    let b = cloud.bounds();
    let (w, h) = (b.width(), b.height());
    if w == 0.0 && h == 0.0 {
        // Every point coincides; each nearest-neighbour distance is zero.
        return Ok(0.0);
    }

    // Aim for ~2 points per bucket; fall back to a 1-D split when the cloud
    // is a horizontal or vertical line.
    let mut cell = (w * h * 2.0 / n as f64).sqrt();
    if cell <= 0.0 {
        cell = w.max(h) / (n as f64).sqrt().max(1.0);
    }
    let ncx = ((w / cell).ceil() as usize).max(1);
    let ncy = ((h / cell).ceil() as usize).max(1);

    let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); ncx * ncy];
    let bucket_of = |p: &Point3| -> (usize, usize) {
        let ix = (((p.x - b.xmin) / cell).floor() as usize).min(ncx - 1);
        let iy = (((p.y - b.ymin) / cell).floor() as usize).min(ncy - 1);
        (ix, iy)
    };
    for (i, p) in pts.iter().enumerate() {
        let (ix, iy) = bucket_of(p);
        buckets[iy * ncx + ix].push(i as u32);
    }

    let ring_max = ncx.max(ncy);
    let mut sum = 0.0;
    for (i, p) in pts.iter().enumerate() {
        let (cx, cy) = bucket_of(p);
        let mut best = f64::INFINITY; // squared distance
        let scan = |ix: isize, iy: isize, best: &mut f64| {
            if ix < 0 || iy < 0 || ix as usize >= ncx || iy as usize >= ncy {
                return;
            }
            for &j in &buckets[iy as usize * ncx + ix as usize] {
                if j as usize == i {
                    continue;
                }
                let q = &pts[j as usize];
                let (dx, dy) = (p.x - q.x, p.y - q.y);
                let d2 = dx * dx + dy * dy;
                if d2 < *best {
                    *best = d2;
                }
            }
        };
        for ring in 0..=ring_max {
            let (cx, cy) = (cx as isize, cy as isize);
            let k = ring as isize;
            if k == 0 {
                scan(cx, cy, &mut best);
            } else {
                for ix in (cx - k)..=(cx + k) {
                    scan(ix, cy - k, &mut best);
                    scan(ix, cy + k, &mut best);
                }
                for iy in (cy - k + 1)..=(cy + k - 1) {
                    scan(cx - k, iy, &mut best);
                    scan(cx + k, iy, &mut best);
                }
            }
            // Anything outside the rings scanned so far is at least
            // ring·cell away; once the best hit beats that bound, stop.
            let reach = ring as f64 * cell;
            if best <= reach * reach {
                break;
            }
        }
        sum += best.sqrt();
    }
    Ok(sum / n as f64)
}

/// Least-squares plane `z = b0 + b1·x + b2·y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneFit {
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
}

impl PlaneFit {
    /// Plane elevation at (x, y).
    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        self.b0 + self.b1 * x + self.b2 * y
    }
}

/// Rank tolerance for the plane-fit normal matrix: the fit is rejected when
/// the smallest eigenvalue drops below 1e-12 times the largest.
const RANK_TOL: f64 = 1e-12;

/// Plane fit kept in centred coordinates (x−x̄, y−ȳ, z−z₀) for numerical
/// headroom; `base` is the fitted elevation at the centroid.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CenteredPlane {
    pub xc: f64,
    pub yc: f64,
    pub base: f64,
    pub b1: f64,
    pub b2: f64,
}

impl CenteredPlane {
    /// Vertical residual (observed − fitted) of one point.
    pub fn residual(&self, p: &Point3) -> f64 {
        (p.z - self.base) - (self.b1 * (p.x - self.xc) + self.b2 * (p.y - self.yc))
    }
}

/// Ordinary least squares in the vertical direction, solved through the
/// centred normal equations. Shifting z by the first sample keeps constant
/// input exactly flat: the fit then has zero slope and zero residuals in
/// floating point, not merely small ones.
pub(crate) fn fit_centered(points: &[Point3]) -> Result<CenteredPlane> {
    let n = points.len();
    if n < 3 {
        return Err(Error::InsufficientData(format!(
            "plane fit needs at least three points, got {n}"
        )));
    }
    let nf = n as f64;
    let zs = points[0].z;

    let (mut sx, mut sy, mut sz) = (0.0, 0.0, 0.0);
    for p in points {
        sx += p.x;
        sy += p.y;
        sz += p.z - zs;
    }
    let (xc, yc, c0) = (sx / nf, sy / nf, sz / nf);

    let (mut sxx, mut sxy, mut syy, mut sxz, mut syz) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for p in points {
        let dx = p.x - xc;
        let dy = p.y - yc;
        let dz = (p.z - zs) - c0;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
        sxz += dx * dz;
        syz += dy * dz;
    }

    // The centred normal matrix is block diagonal: diag(n) ⊕ [[sxx,sxy],[sxy,syy]].
    // Its eigenvalues are n and the two eigenvalues of the 2×2 block.
    let m = 0.5 * (sxx + syy);
    let d = 0.5 * (sxx - syy);
    let disc = (d * d + sxy * sxy).sqrt();
    let (lo, hi) = (m - disc, m + disc);
    let min_eig = lo.min(nf);
    let max_eig = hi.max(nf);
    if min_eig < RANK_TOL * max_eig {
        return Err(Error::DegenerateGeometry(
            "points are collinear in the horizontal plane".into(),
        ));
    }

    let det = sxx * syy - sxy * sxy;
    let b1 = (sxz * syy - syz * sxy) / det;
    let b2 = (syz * sxx - sxz * sxy) / det;
    Ok(CenteredPlane {
        xc,
        yc,
        base: zs + c0,
        b1,
        b2,
    })
}

/// Fits the least-squares plane `z = b0 + b1·x + b2·y` through the cloud.
///
/// Fails with [`Error::InsufficientData`] below three points and with
/// [`Error::DegenerateGeometry`] when the horizontal locations are
/// (near-)collinear.
pub fn fit_plane(cloud: &PointCloud) -> Result<PlaneFit> {
    let c = fit_centered(cloud.points())?;
    Ok(PlaneFit {
        b0: c.base - c.b1 * c.xc - c.b2 * c.yc,
        b1: c.b1,
        b2: c.b2,
    })
}

/// Subtracts the plane from every elevation, leaving x and y untouched.
pub fn detrend(cloud: &PointCloud, plane: &PlaneFit) -> PointCloud {
    let points = cloud
        .points()
        .iter()
        .map(|p| Point3::new(p.x, p.y, p.z - plane.evaluate(p.x, p.y)))
        .collect();
    PointCloud::from_checked(points)
}
