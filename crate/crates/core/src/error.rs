use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("wavelength {wavelength_um} um is outside the valid range [{min_um}, {max_um}] um of {material}")]
    OutOfRange {
        material: String,
        wavelength_um: f64,
        min_um: f64,
        max_um: f64,
    },

    #[error("no dispersion data for axis {axis} of {material}")]
    MissingAxis { material: String, axis: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("matrix is identically zero")]
    ZeroMatrix,

    #[error("spectral range too small: {0}")]
    SpectralRangeTooSmall(String),

    #[error("input is not normalized (norm = {0})")]
    NotNormalized(f64),

    #[error("optimizer failed to bracket a maximum: {0}")]
    Bracket(String),

    #[error("singular value decomposition failed to converge")]
    Svd,

    #[error("parse error in {path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
