use thiserror::Error;

/// Everything that can go wrong between a body description and a bound report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("body is not submerged: min x2 on the contour is {min_depth}")]
    NotSubmerged { min_depth: f64 },

    #[error("contour is not a simple closed curve: {0}")]
    NotSimple(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("singular evaluation: {0}")]
    Singularity(String),

    #[error("evaluation did not reach the requested accuracy (achieved {achieved:.3e}): {what}")]
    Evaluation { what: String, achieved: f64 },

    #[error("boundary system is ill-conditioned (estimated condition number {cond:.3e})")]
    IllConditioned { cond: f64 },

    #[error("point outside the fluid domain: {0}")]
    Domain(String),

    #[error("far-field and Kochin coefficients disagree (relative difference {discrepancy:.3e})")]
    ExtractionMismatch { discrepancy: f64 },

    #[error("inconsistent result: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}
