use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not squarefree")]
    NotSquarefree(i64),
    #[error("value {value} out of range: {what}")]
    OutOfRange { what: &'static str, value: i64 },
    #[error("dyadic data has sum of e*f = {sum}, but the degree is {degree}")]
    DyadicMismatch { sum: u64, degree: u64 },
    #[error("no closed form for L({k}, chi) with conductor {conductor}: parity mismatch")]
    ParityError { k: i64, conductor: i64 },
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("rank 2 needs residues of Dedekind zeta functions; use the bound evaluators instead")]
    ResidueRequired,
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("internal parity failure in the L-function factorization: {0}")]
    ParityInternal(String),
    #[error("sequence is not an Euler transform of a nonnegative integer sequence (index {index})")]
    NotRealizable { index: usize },
    #[error("denominator of the bound is not positive")]
    DenominatorNonpositive,
    #[error("radicals with bases {0} and {1} cannot be combined exactly")]
    IncompatibleRadicals(String, String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
