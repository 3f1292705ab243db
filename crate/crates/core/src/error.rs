use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scalar argument fell outside the domain of the operation.
    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid percentile grid: {0}")]
    InvalidGrid(String),

    #[error("invalid fit range {high}:{low} (need 0 < low < high <= 100)")]
    InvalidRange { high: f64, low: f64 },

    #[error("insufficient data: need {needed} usable points, found {found}")]
    InsufficientPoints { needed: usize, found: usize },

    #[error("all abscissae are equal; slope is undefined")]
    DegenerateAbscissa,

    #[error("observed values have zero total variance")]
    ZeroVariance,

    #[error(
        "nonlinear fit did not converge after {iterations} iterations \
         (last iterate A = {coefficient}, alpha = {exponent})"
    )]
    NoConvergence {
        iterations: usize,
        coefficient: f64,
        exponent: f64,
    },

    #[error("power law with zero exponent has no unique inverse")]
    ZeroExponent,

    #[error("unsupported combination: {0}")]
    UnsupportedCombination(&'static str),

    #[error("invalid indicator row '{name}': {reason}")]
    InvalidIndicators { name: String, reason: String },

    #[error("citation list is empty")]
    EmptyList,

    #[error("invalid citation record: {0}")]
    InvalidRecord(String),
}
