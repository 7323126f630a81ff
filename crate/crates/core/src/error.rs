use thiserror::Error;

/// Errors shared across the whole crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("size budget exceeded: {0}")]
    Budget(String),
    #[error("not a subgroup: {0}")]
    Containment(String),
    #[error("subgroup is not normal: {0}")]
    Normality(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("series format error: {0}")]
    Format(String),
    #[error("substitution requires positive valuation, got {0}")]
    Substitution(i64),
    #[error("truncation would lose required terms: {0}")]
    Truncation(String),
    #[error("no contraction: gain on ring ({ring_gain}) must exceed gain on label ({label_gain})")]
    NoContraction { ring_gain: i64, label_gain: i64 },
    #[error("insufficient precision: {0}")]
    Precision(String),
    #[error("identity violated: {0}")]
    IdentityViolation(String),
    #[error("construction check failed: {0}")]
    Construction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
