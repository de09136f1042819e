use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("argument {arg} outside the supported range of {what}")]
    OutOfRange { what: &'static str, arg: f64 },

    #[error("singular matrix (pivot {pivot:.3e} at column {column})")]
    Singular { column: usize, pivot: f64 },

    #[error("ill-conditioned system in the {regime} regime (condition estimate {estimate:.3e})")]
    IllConditioned { regime: String, estimate: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("density matrix is not of the supported X block form: {0}")]
    FormMismatch(String),

    #[error("ODE integration failed: step size underflow at u = {at}")]
    StepUnderflow { at: f64 },

    #[error("{0}")]
    NoData(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
