use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} is outside its domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("instance has {count} best arms, a unique best arm is required")]
    NonUniqueBest { count: usize },

    #[error("arm {arm} is not {eps}-good")]
    NotEpsGood { arm: usize, eps: f64 },

    #[error("root finding did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("arm {0} has not been pulled yet")]
    UnpulledArm(usize),

    #[error("multiplicative setting requires strictly positive means, arm {arm} has mean {mean}")]
    NonPositiveMean { arm: usize, mean: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for errors caused by the caller's input rather than the environment.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io { .. } | Error::Csv { .. })
    }
}
