//! Agreement statistics between roughness maps: Pearson correlation,
//! coefficient of determination, full pairwise matrices, and sweeps of those
//! matrices across window scales.

use crate::error::{Error, Result};
use crate::gridding::Dem;
use crate::roughness::{roughness_map, RoughnessIndex, RoughnessMap, WindowScale};

/// Pairwise correlation (`r`) and coefficient of determination (`r2`) between
/// all five roughness indices at one window scale.
///
/// Rows and columns follow [`RoughnessIndex::ALL`] regardless of the order in
/// which the maps were supplied. Pairs whose correlation is undefined (a
/// constant map, or too few common cells) are stored as NaN rather than a
/// fabricated value; the diagonal is 1 by definition.
#[derive(Debug, Clone)]
pub struct ComparisonMatrix {
    /// Window scale shared by all compared maps.
    pub scale: WindowScale,
    /// Row/column labels, always in canonical order.
    pub labels: [RoughnessIndex; 5],
    /// Pearson correlation coefficients; symmetric, unit diagonal.
    pub r: [[f64; 5]; 5],
    /// Coefficients of determination; symmetric, unit diagonal.
    pub r2: [[f64; 5]; 5],
}

/// One [`ComparisonMatrix`] per window scale, scales strictly increasing.
#[derive(Debug, Clone)]
pub struct ScaleSweep {
    /// Matrices ordered by ascending window scale.
    pub matrices: Vec<ComparisonMatrix>,
}

/// Collects the values of cells that are valid in both maps, in row-major
/// order. Grid dimensions must match.
fn common_cells(a: &RoughnessMap, b: &RoughnessMap) -> Result<(Vec<f64>, Vec<f64>)> {
    let (ga, gb) = (&a.grid, &b.grid);
    if ga.nrows() != gb.nrows() || ga.ncols() != gb.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "cannot compare a {}x{} map with a {}x{} map",
            ga.nrows(),
            ga.ncols(),
            gb.nrows(),
            gb.ncols()
        )));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (row, col, va) in ga.valid_cells() {
        if let Some(vb) = gb.get(row, col) {
            xs.push(va);
            ys.push(vb);
        }
    }
    Ok((xs, ys))
}

/// Centered sums for a paired sample: Σ(A−Ā)(B−B̄), Σ(A−Ā)², Σ(B−B̄)².
///
/// Both series are shifted by their first value before the means are taken,
/// so constant input yields exactly zero sums and the zero-variance guard is
/// an exact comparison rather than a tolerance.
fn centered_sums(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let (sx, sy) = (xs[0], ys[0]);
    let mx = xs.iter().map(|v| v - sx).sum::<f64>() / n;
    let my = ys.iter().map(|v| v - sy).sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let dx = (x - sx) - mx;
        let dy = (y - sy) - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    (sxy, sxx, syy)
}

fn checked_sums(a: &RoughnessMap, b: &RoughnessMap) -> Result<(f64, f64, f64)> {
    let (xs, ys) = common_cells(a, b)?;
    if xs.len() < 2 {
        return Err(Error::UndefinedCorrelation(format!(
            "only {} cells are valid in both maps; at least 2 are required",
            xs.len()
        )));
    }
    let (sxy, sxx, syy) = centered_sums(&xs, &ys);
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation(
            "at least one map is constant over the common cells".to_string(),
        ));
    }
    Ok((sxy, sxx, syy))
}

/// Pearson correlation coefficient between two roughness maps:
///
/// r = Σ(A−Ā)(B−B̄) / sqrt(Σ(A−Ā)² · Σ(B−B̄)²)
///
/// taken over the cells valid in both maps. Constant maps make the quotient
/// meaningless, so they are reported as [`Error::UndefinedCorrelation`]
/// rather than silently mapped to zero.
pub fn pearson(a: &RoughnessMap, b: &RoughnessMap) -> Result<f64> {
    let (sxy, sxx, syy) = checked_sums(a, b)?;
    Ok(sxy / (sxx * syy).sqrt())
}

/// Coefficient of determination of the least-squares regression of `b` on
/// `a` over their common valid cells: R² = 1 − SS_res / SS_tot.
///
/// For a simple linear regression this equals `pearson(a, b)²`; computing it
/// through the regression keeps that identity testable instead of true by
/// definition.
pub fn r_squared(a: &RoughnessMap, b: &RoughnessMap) -> Result<f64> {
    let (xs, ys) = common_cells(a, b)?;
    if xs.len() < 2 {
        return Err(Error::UndefinedCorrelation(format!(
            "only {} cells are valid in both maps; at least 2 are required",
            xs.len()
        )));
    }
    let (sxy, sxx, syy) = centered_sums(&xs, &ys);
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation(
            "at least one map is constant over the common cells".to_string(),
        ));
    }
    let slope = sxy / sxx;
    let n = xs.len() as f64;
    let (fx, fy) = (xs[0], ys[0]);
    let mx = xs.iter().map(|v| v - fx).sum::<f64>() / n;
    let my = ys.iter().map(|v| v - fy).sum::<f64>() / n;
    let mut ss_res = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        let dx = (x - fx) - mx;
        let dy = (y - fy) - my;
        let e = dy - slope * dx;
        ss_res += e * e;
    }
    Ok(1.0 - ss_res / syy)
}

/// Builds the full 5×5 comparison matrix for one window scale.
///
/// `maps` must contain each of the five indices exactly once, all on grids of
/// the same shape and scale; any input order is accepted and normalized to
/// [`RoughnessIndex::ALL`]. Pairs with undefined correlation become NaN.
pub fn correlation_matrix(maps: &[RoughnessMap]) -> Result<ComparisonMatrix> {
    if maps.len() != 5 {
        return Err(Error::InvalidIndexSet(format!(
            "expected exactly 5 roughness maps, got {}",
            maps.len()
        )));
    }
    let mut slots: [Option<&RoughnessMap>; 5] = [None; 5];
    for map in maps {
        let pos = RoughnessIndex::ALL
            .iter()
            .position(|idx| *idx == map.index)
            .expect("RoughnessIndex::ALL covers every variant");
        if slots[pos].is_some() {
            return Err(Error::InvalidIndexSet(format!(
                "index {} appears more than once",
                map.index
            )));
        }
        slots[pos] = Some(map);
    }
    let ordered: Vec<&RoughnessMap> = slots
        .iter()
        .map(|s| s.expect("five distinct maps fill all five slots"))
        .collect();

    let scale = ordered[0].scale;
    let (nrows, ncols) = (ordered[0].grid.nrows(), ordered[0].grid.ncols());
    for map in &ordered {
        if map.scale != scale {
            return Err(Error::ShapeMismatch(format!(
                "mixed window scales: {} vs {}",
                map.scale, scale
            )));
        }
        if map.grid.nrows() != nrows || map.grid.ncols() != ncols {
            return Err(Error::ShapeMismatch(format!(
                "map {} is {}x{}, expected {}x{}",
                map.index,
                map.grid.nrows(),
                map.grid.ncols(),
                nrows,
                ncols
            )));
        }
    }

    let mut r = [[1.0f64; 5]; 5];
    let mut r2 = [[1.0f64; 5]; 5];
    for i in 0..5 {
        for j in (i + 1)..5 {
            let (rv, r2v) = match pearson(ordered[i], ordered[j]) {
                Ok(rv) => (rv, r_squared(ordered[i], ordered[j])?),
                Err(Error::UndefinedCorrelation(_)) => (f64::NAN, f64::NAN),
                Err(e) => return Err(e),
            };
            r[i][j] = rv;
            r[j][i] = rv;
            r2[i][j] = r2v;
            r2[j][i] = r2v;
        }
    }
    Ok(ComparisonMatrix { scale, labels: RoughnessIndex::ALL, r, r2 })
}

/// Computes all five roughness maps and their comparison matrix at each
/// requested window scale. Scales are sorted ascending and deduplicated, so
/// the resulting matrices are strictly increasing in scale.
pub fn scale_sweep(dem: &Dem, scales: &[WindowScale]) -> Result<ScaleSweep> {
    let mut ws = scales.to_vec();
    ws.sort();
    ws.dedup();
    if ws.is_empty() {
        return Err(Error::InvalidParameter(
            "at least one window scale is required".to_string(),
        ));
    }
    let mut matrices = Vec::with_capacity(ws.len());
    for w in ws {
        let maps: Vec<RoughnessMap> = RoughnessIndex::ALL
            .iter()
            .map(|&idx| roughness_map(dem, idx, w))
            .collect::<Result<_>>()?;
        matrices.push(correlation_matrix(&maps)?);
    }
    Ok(ScaleSweep { matrices })
}
