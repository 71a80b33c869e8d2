//! Error type shared by every module.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("vectors carry different signatures")]
    SignatureMismatch,

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("degenerate frame: {0}")]
    DegenerateFrame(String),

    #[error("residual span is not positive definite: {0}")]
    IndefiniteResidual(String),

    #[error("invalid projection frame: {0}")]
    InvalidFrame(String),

    #[error("invalid moduli: {0}")]
    Moduli(String),

    #[error("invalid curvature: {0}")]
    Curvature(String),

    #[error("immersion failure: {0}")]
    ImmersionFailure(String),

    #[error("point violates the product quadric constraints: {0}")]
    Domain(String),

    #[error("wrong curvature-vector regime: {0}")]
    Regime(String),

    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),

    #[error("curve is not unit speed: |<t,t>-1| = {deviation}")]
    NonUnitSpeedCurve { deviation: f64 },

    #[error("exact and numeric regime classification disagree: {0}")]
    RegimeInconsistency(String),

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("invalid map description: {0}")]
    MapDescription(String),

    #[error("check {check}: {source}")]
    Check {
        check: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Attaches the name of the verification check an error surfaced in.
    pub fn in_check(self, check: &str) -> Error {
        Error::Check {
            check: check.to_string(),
            source: Box::new(self),
        }
    }
}
