use thiserror::Error;

/// Errors raised by the forward and inverse solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A physical parameter violates its admissible range.
    #[error("parameter violation: {0}")]
    ParameterViolation(&'static str),

    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation at or too close to a kernel singularity.
    #[error("singularity: {0}")]
    Singularity(String),

    /// Discretization or solver configuration cannot deliver the requested accuracy.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// Operand layouts do not agree.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// The modal matrix for order `order` is numerically singular.
    #[error("ill-conditioned mode n = {order} (|det| = {det:e}, scale = {scale:e})")]
    IllConditionedMode { order: i32, det: f64, scale: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn config(msg: impl Into<String>) -> Error {
    Error::Configuration(msg.into())
}

pub(crate) fn shape(msg: impl Into<String>) -> Error {
    Error::ShapeMismatch(msg.into())
}

pub(crate) fn singular(msg: impl Into<String>) -> Error {
    Error::Singularity(msg.into())
}
