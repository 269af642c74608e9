use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain mismatch: {0} vs {1}")]
    DomainMismatch(String, String),
    #[error("{op} is not supported over {domain}")]
    UnsupportedDomain { op: &'static str, domain: String },
    #[error("{0}: zero input")]
    ZeroInput(&'static str),
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("rho too small: min(|a|,|b|) must exceed 2 ({0})")]
    RhoTooSmall(String),
    #[error("partial quotients must be distinct")]
    EqualQuotients,
    #[error("certification failed at index {index}: {what}")]
    CertificationFailed { index: usize, what: String },
    #[error("identity violated at index {index}: {what}")]
    IdentityViolated { index: usize, what: String },
    #[error("palindrome violated for m_{0}")]
    PalindromeViolated(usize),
    #[error("recurrence and direct morphism disagree at index {0} under both parity conventions")]
    RecurrenceMismatch(usize),
    #[error("precision cap exceeded ({cap} bits); last error bound 2^{last_log2}")]
    PrecisionCapExceeded { cap: u64, last_log2: i64 },
    #[error("division by a scalar whose error region contains zero")]
    DivisionByPossibleZero,
    #[error("scalar representations do not match")]
    ScalarKindMismatch,
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("search space too large: {count} candidates (limit {limit})")]
    SearchSpaceTooLarge { count: u128, limit: u128 },
    #[error("dependence criterion precondition unmet: {0}")]
    CriterionPreconditionUnmet(String),
    #[error("three points below the (6X)^(-1/2) threshold have nonzero determinant {0}")]
    DeterminantNonzero(String),
    #[error("triple is not degenerate (x0*x2 != x1^2)")]
    NotDegenerate,
    #[error("triple is not primitive")]
    NotPrimitive,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
