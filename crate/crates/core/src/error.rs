use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("scalars with different moduli cannot be combined")]
    MixedPrimes,
    #[error("invalid presentation: {}", .0.join("; "))]
    Presentation(Vec<String>),
    #[error("product lands in degree {degree}, above the truncation degree {max}")]
    Truncation { degree: u32, max: u32 },
    #[error("basis is not Frobenius-adapted: {0}; supply a basis whose p-th powers are (multiples of) basis elements or zero")]
    NotFrobeniusAdapted(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid column: {0}")]
    InvalidColumn(String),
    #[error("widths differ: {0} vs {1}")]
    WidthMismatch(u64, u64),
    #[error("divided powers are only defined on positive components")]
    ComponentZero,
    #[error("restriction needs n <= m (got n = {n}, m = {m})")]
    BadRestriction { n: u64, m: u64 },
    #[error("operand is not homogeneous in component {0}")]
    NotInComponent(u64),
    #[error("X is not connected; split it with the product decomposition of the free loop space and treat each factor separately")]
    NotConnected,
    #[error("not a limit class: {0}")]
    NotLimitClass(String),
    #[error("limit product did not stabilise at truncation {0}")]
    Unstable(u64),
    #[error("invalid sequence: {0}")]
    Sequence(String),
    #[error("{0}")]
    Io(String),
}
