use thiserror::Error;

use crate::quadrature::QuadratureError;
use crate::specfun::SpecFunError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("series term k = {k}: {source}")]
    SeriesTerm {
        k: usize,
        #[source]
        source: SpecFunError,
    },
    #[error("parameters do not match: {0}")]
    MismatchedParameters(String),
    #[error("no data: {0}")]
    NoData(String),
}

impl Error {
    /// True for failures of a numerical evaluator (poles, non-convergence,
    /// non-finite values) as opposed to rejected input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::SpecFun(SpecFunError::Domain { .. }) => false,
            Error::SpecFun(_) | Error::SeriesTerm { .. } => true,
            Error::Quadrature(QuadratureError::InvalidRange(..))
            | Error::Quadrature(QuadratureError::InvalidSettings(_)) => false,
            Error::Quadrature(_) => true,
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
