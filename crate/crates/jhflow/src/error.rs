use thiserror::Error;

/// Errors reported by the solution families and their verification helpers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A spec violates one of its construction invariants.
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    /// Evaluation was requested outside the validity window of a profile.
    #[error("theta {theta} outside validity window ({lo}, {hi})")]
    OutOfValidity { theta: f64, lo: f64, hi: f64 },

    /// The argument is too close to a pole of the Weierstrass function.
    #[error("argument {tau} within {dist:e} of a Weierstrass pole")]
    PoleProximity { tau: f64, dist: f64 },

    /// A bracketing root search failed to find a sign change.
    #[error("no bracket found: {0}")]
    NoBracket(String),

    /// A numerical trajectory left the representable range.
    #[error("solution blow-up at theta = {theta} (|H| > {limit:e})")]
    Blowup { theta: f64, limit: f64 },

    /// A finite-difference stencil does not fit inside the validity region.
    #[error("stencil around ({x}, {y}) with step {step} leaves the validity region")]
    StencilOutOfDomain { x: f64, y: f64, step: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid_spec(msg: impl Into<String>) -> Self {
        Error::InvalidSpec(msg.into())
    }
}
