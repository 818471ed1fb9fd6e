use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors across the library. The coarse categories map onto the stable CLI
/// exit codes: argument errors (2), numerical-domain errors (3), I/O and file
/// format errors (4).
#[derive(Debug, Error)]
pub enum Error {
    #[error("near-boundary point: face distance {distance:.3e} <= margin {margin:.3e}")]
    NearBoundary { distance: f64, margin: f64 },

    #[error("singular state: {detail}")]
    SingularState { detail: String },

    #[error("non-finite integrand: {detail}")]
    NonFiniteIntegrand { detail: String },

    #[error("surrogate domain mismatch at t = {t:?}")]
    SurrogateDomainMismatch { t: [f64; 3] },

    #[error("unphysical purity {p}: expected P in [1/4, 1]")]
    UnphysicalPurity { p: f64 },

    #[error("input is not special-unitary: residual {residual:.3e}")]
    NotUnitary { residual: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}: bad surrogate grid file: {detail}")]
    GridFormat { path: PathBuf, detail: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Stable process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) => 2,
            Error::NearBoundary { .. }
            | Error::SingularState { .. }
            | Error::NonFiniteIntegrand { .. }
            | Error::SurrogateDomainMismatch { .. }
            | Error::UnphysicalPurity { .. }
            | Error::NotUnitary { .. } => 3,
            Error::GridFormat { .. } | Error::Io { .. } => 4,
        }
    }
}
