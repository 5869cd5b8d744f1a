use alloc::string::String;

/// Failure modes shared by every module.
///
/// The variants fall in three families that the CLI maps to exit codes:
/// malformed input, domain errors, and resource ceilings.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("exponent mode mismatch: {0}")]
    ModeMismatch(String),
    #[error("shape mismatch: expected {expected} entries, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("element is not a unit")]
    NonUnit,
    #[error("division by zero")]
    ZeroDivision,
    #[error("tower too shallow: series needs level {needed}, tower has {available}")]
    TowerTooShallow { needed: u32, available: u32 },
    #[error("tower invalid at stage {stage}: b_{next}^d != b_{stage}", next = .stage + 1)]
    TowerInvalid { stage: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("resource ceiling exceeded: {0}")]
    Resource(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = core::result::Result<T, Error>;
