use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at u = {0}")]
    Pole(String),
    #[error("invalid q-context: {0}")]
    InvalidContext(String),
    #[error("exponent {exponent} is not representable with D = {d}; requires D divisible by {required}")]
    NotRepresentable {
        exponent: String,
        d: u32,
        required: String,
    },
    #[error("invalid Cartan type {family}{rank}")]
    InvalidCartanKind { family: char, rank: usize },
    #[error("simple index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("braid order requires distinct indices, got ({0}, {0})")]
    SameIndex(usize),
    #[error("enumeration cap {cap} exceeded after {found} elements")]
    CapExceeded { cap: usize, found: usize },
    #[error("weight is not real (no exponent vector)")]
    NotReal,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("J is not a subset of P(t): {0}")]
    NotSubsetOfP(String),
    #[error("({0}) is not a placed shape: no standard tableaux")]
    NotPlacedShape(String),
    #[error("not a placed skew shape: {0}")]
    NotSkew(String),
    #[error("relation check failed: {0}")]
    RelationFailure(String),
    #[error("tau_{0} undefined: t(X^alpha_{0}) = 1")]
    TauUndefined(usize),
    #[error("weight has empty generalized weight space")]
    EmptyWeightSpace,
    #[error("zero vector")]
    ZeroVector,
    #[error("parse error in {input:?} at position {position}: {message}")]
    Parse {
        input: String,
        position: usize,
        message: String,
    },
    #[error("schema mismatch: expected {expected}, found {found}")]
    Schema { expected: String, found: String },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("config: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
