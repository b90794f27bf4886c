use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("polynomial is not irreducible over F_{0}")]
    Reducible(u64),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("element is zero at precision {0}")]
    ZeroAtPrecision(i64),
    #[error("not invertible at precision")]
    NotInvertible,
    #[error("denominator divisible by p: {0}")]
    NonIntegral(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("truncation insufficient: degree {degree} certifies only m^{certified}, need m^{target}")]
    TruncationInsufficient {
        degree: usize,
        certified: i64,
        target: i64,
    },
    #[error("zero discriminant at precision")]
    ZeroDiscriminant,
    #[error("reduction type: {0}")]
    WrongReductionType(String),
    #[error("coefficients not in the maximal ideal")]
    NotNormalized,
    #[error("field must be unramified")]
    Ramified,
    #[error("field must be Q_p")]
    NotQp,
    #[error("point not on curve (residual valuation {0})")]
    NotOnCurve(String),
    #[error("point is not in E_0 (reduces to the singular point)")]
    NotInE0,
    #[error("filtration mismatch: v(x) = {vx}, v(y) = {vy}")]
    FiltrationMismatch { vx: i64, vy: i64 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("size bound exceeded: {size} > {bound}")]
    SizeBound { size: u128, bound: u128 },
    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
