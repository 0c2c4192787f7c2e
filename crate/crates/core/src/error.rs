use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("image size must be at least {min}, got {size}")]
    InvalidSize { size: usize, min: usize },
    #[error("expected {expected} pixels for a {size}x{size} image, got {actual}")]
    PixelCount {
        size: usize,
        expected: usize,
        actual: usize,
    },
    #[error("coordinate ({row}, {col}) lies outside a {size}x{size} grid")]
    CoordinateOutOfRange { row: usize, col: usize, size: usize },
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),
    #[error("images differ in size ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error("cat map period for N={size} exceeded the 3N cap")]
    PeriodCapExceeded { size: u64 },
    #[error("need samples at 2 or more distinct image sizes, got {0}")]
    TooFewTimingSamples(usize),
    #[error(transparent)]
    Pgm(#[from] PgmError),
    #[error("{}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

/// Reasons a binary PGM payload is rejected.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PgmError {
    #[error("unsupported netpbm variant {0:?}, only binary P5 is accepted")]
    UnsupportedFormat(String),
    #[error("malformed PGM header: {0}")]
    MalformedHeader(&'static str),
    #[error("image must be square, got {width}x{height}")]
    NotSquare { width: usize, height: usize },
    #[error("max value must be 255, got {0}")]
    MaxValue(usize),
    #[error("truncated payload: expected {expected} bytes, got {actual}")]
    Truncated { expected: usize, actual: usize },
}
