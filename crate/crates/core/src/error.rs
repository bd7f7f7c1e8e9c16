//! Error type shared across the library.

use thiserror::Error;

/// Everything that can go wrong while building or analysing a terrain model.
#[derive(Debug, Error)]
pub enum Error {
    /// A text input (XYZ file, ASCII grid) could not be parsed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// An operation that needs data received none.
    #[error("input contains no usable data")]
    EmptyInput,

    /// Too few samples for the requested statistic (e.g. fewer than two
    /// values for a standard deviation, fewer than three points for a plane).
    #[error("not enough data: {0}")]
    InsufficientData(String),

    /// Geometry is degenerate: collinear points, rank-deficient plane fit,
    /// zero-area triangulation.
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    /// A caller-supplied parameter is out of range (cell size, window scale…).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The raster is smaller than a single analysis window.
    #[error("raster {nrows}x{ncols} is smaller than one {w}x{w} window")]
    InsufficientExtent { nrows: usize, ncols: usize, w: usize },

    /// Two rasters that must share a shape do not.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// Correlation is undefined (zero variance or fewer than two shared cells).
    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(String),

    /// A raster holds no valid cells at all.
    #[error("raster has no valid cells")]
    EmptyMap,

    /// A set of roughness maps does not contain each index exactly once.
    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),

    /// A coordinate was NaN or infinite.
    #[error("non-finite coordinate at point {index}")]
    NonFinite { index: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
