//! Terrain surface-roughness toolkit.
//!
//! The pipeline runs from scattered survey points to comparable roughness
//! maps: detrend the cloud against a least-squares plane, grid it through a
//! Delaunay TIN with linear interpolation, derive slope / curvature /
//! residual-topography rasters, reduce them to per-window roughness indices
//! at one or more window scales, and correlate the resulting maps.

pub mod compare;
pub mod error;
pub mod gridding;
pub mod io;
pub mod pointcloud;
pub mod raster;
pub mod roughness;

pub use compare::{correlation_matrix, pearson, r_squared, scale_sweep, ComparisonMatrix, ScaleSweep};
pub use error::{Error, Result};
pub use gridding::{delaunay, interpolate_grid, make_grid_spec, Dem, GridSpec, Tin};
pub use io::{
    asc_string, matrix_csv, parse_asc, pgm_bytes, read_asc, write_asc, write_matrix_csv,
    write_pgm, NODATA,
};
pub use pointcloud::{
    detrend, fit_plane, load_xyz, mean_spacing, write_xyz, Bounds, PlaneFit, Point3, PointCloud,
};
pub use raster::{
    curvature_cell, curvature_map, focal_mean5, gather_window, residual_topography, slope_cell,
    slope_map, Window3,
};
pub use roughness::{
    ldre, normalize01, rmsh, roughness_map, window_std, RoughnessIndex, RoughnessMap, WindowScale,
};
