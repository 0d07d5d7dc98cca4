use alloc::string::String;

/// Every failure the library reports.
///
/// Variants that carry a `String` describe the failed condition in words; the
/// variant itself is what callers are expected to match on.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {p} exceeds the configured cap {cap}")]
    PrimeTooLarge { p: u64, cap: u64 },
    #[error("field modulus is not irreducible")]
    ReducibleModulus,
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("precision must be at least 1")]
    InvalidPrecision,
    #[error("series precision exhausted")]
    PrecisionExhausted,
    #[error("discriminant vanishes identically")]
    SingularModel,
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("integer overflow")]
    Overflow,
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = core::result::Result<T, Error>;
