use num_bigint::BigInt;
use thiserror::Error;

/// Errors raised by the number-theoretic kernels.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("invalid cover: {0}")]
    InvalidCover(String),

    #[error("family has no finite critical value in this model")]
    NoCriticalValue,

    #[error("polynomial is not separable (zero discriminant)")]
    NotSeparable,

    #[error("no root of F modulo {p}")]
    NoRoot { p: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Raised when no shift in `0..=omega(m)` makes `m` an exact divisor even
    /// though the hypotheses of the shift lemma hold. This can only be a bug.
    #[error("shift lemma violated for m = {m}, n = {n}")]
    LemmaViolation { m: u64, n: BigInt },

    /// A checked bound or identity failed; indicates a bug.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("degenerate fiber at n = {n}: {reason}")]
    DegenerateFiber { n: BigInt, reason: String },

    #[error("invalid parameters: {0}")]
    Params(String),
}

pub type Result<T> = std::result::Result<T, Error>;
