use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("cannot parse rational {input:?}: {reason}")]
    ParseRational { input: String, reason: String },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("malformed scheme: {0}")]
    MalformedScheme(String),

    #[error("scheme is not grid-aligned: {0}")]
    NotGridAligned(String),

    #[error("harmonic mean needs a nonempty list of positive values")]
    EmptyOrNonPositive,

    #[error("list of {len} values exceeds the enumeration bound of {bound}")]
    Capacity { len: usize, bound: usize },

    #[error("incompatible parts: {0}")]
    IncompatibleParts(String),

    #[error("arguments out of order: expected r1 > r2 >= 1, got r1={r1}, r2={r2}")]
    ArgumentOrder { r1: u64, r2: u64 },

    #[error("r1={r1} and r2={r2} share the factor {gcd}; reduce first with gcd_reduce")]
    NotCoprime { r1: u64, r2: u64, gcd: u64 },

    #[error("time {0} h lies outside the scheme")]
    TimeOutOfRange(String),

    #[error("unknown object index {0}")]
    UnknownObject(usize),

    #[error("base scheme is not optimal for the problem")]
    NotOptimal,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("the two agent types must have different completion times (T = 1 given)")]
    EqualSpeeds,

    #[error("{0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
