use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GhostError {
    #[error("valuation of zero requested")]
    ValuationOfZero,
    #[error("{0} is not a prime")]
    NotPrime(i64),
    #[error("weights on different components: {k} is not congruent to {component} mod {delta}")]
    ComponentMismatch { k: i64, component: i64, delta: i64 },
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("excluded pair (p, N) = ({p}, {n}): need pN > 3")]
    ExcludedPair { p: i64, n: i64 },
    #[error("p = {p} divides the level N = {n}")]
    PrimeDividesLevel { p: i64, n: i64 },
    #[error("non-integral dimension formula value {0} (formula/implementation fault)")]
    NonIntegralDimension(String),
    #[error("(G) fails: {0}")]
    GrowthFails(String),
    #[error("growth axiom violated near i = {0}")]
    GrowthViolated(i64),
    #[error("base window required: {0}")]
    BaseWindowRequired(String),
    #[error("inconsistent rhobar data: {0}")]
    InconsistentRhobar(String),
    #[error("(LG) requires A, B > 0 (got A = {a}, B = {b})")]
    LinearGrowth { a: String, b: String },
    #[error("inside semistable range: Delta-slope {0} involves an infinite valuation")]
    InsideSemistableRange(i64),
    #[error("empty point set")]
    EmptyInput,
    #[error("theorem does not apply: {0}")]
    TheoremDoesNotApply(String),
    #[error("slope sequence is not certified")]
    Uncertified,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, GhostError>;
