use thiserror::Error;

/// Errors produced by state construction, channels, measurements and parsers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("mode {mode} out of range for a {n_modes}-mode system")]
    ModeOutOfRange { mode: usize, n_modes: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("LUBO conditions violated (residual norm {residual:.3e})")]
    LuboCondition { residual: f64 },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("non-Gaussian gate `{0}` cannot be simulated")]
    NonGaussianGate(String),

    #[error("numerical routine failed: {0}")]
    Numerical(String),

    #[error("gate `{gate}` is not supported by the {backend} backend")]
    UnsupportedGate { gate: String, backend: &'static str },
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_mode(mode: usize, n_modes: usize) -> Result<()> {
    if mode >= n_modes {
        Err(Error::ModeOutOfRange { mode, n_modes })
    } else {
        Ok(())
    }
}

pub(crate) fn check_distinct(i: usize, j: usize, n_modes: usize) -> Result<()> {
    check_mode(i, n_modes)?;
    check_mode(j, n_modes)?;
    if i == j {
        return Err(Error::InvalidArgument(format!(
            "two-mode operation needs distinct modes, got {i} twice"
        )));
    }
    Ok(())
}
