//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid ensemble parameters: {0}")]
    InvalidParams(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: String, got: String },

    #[error("QR iteration did not converge in window [{lo}, {hi}] after {sweeps} sweeps")]
    NonConvergence { lo: usize, hi: usize, sweeps: usize },

    #[error("matrix is not Hermitian: max asymmetry {0:.3e}")]
    NotHermitian(f64),

    #[error("degenerate draw: orthogonalization failed twice")]
    DegenerateDraw,

    #[error("region outside admissible range: {0}")]
    RegionOutOfRange(String),

    #[error("sample uses {got} coordinates, operation requires {required}")]
    CoordinateConvention { required: &'static str, got: &'static str },

    #[error("index {p} outside the admissible range: {reason}")]
    IndexOutOfRange { p: usize, reason: String },

    #[error("Gram eigenvalue {value:.6e} violates [0,1] beyond tolerance")]
    SpectrumOutOfRange { value: f64 },

    #[error("too many failed trials: {failed} of {total}")]
    TooManyFailures { failed: usize, total: usize },

    #[error("calibration found no finite constant dominating the tails")]
    CalibrationFailed,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("malformed {what}: {detail}")]
    Format { what: &'static str, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
