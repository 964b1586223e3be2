use thiserror::Error;

/// Failure modes shared by every module of the crate.
///
/// Variants mirror the precondition violations each operation can report;
/// [`Error::kind`] gives a stable machine-readable tag for the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input must be non-zero")]
    ZeroInput,
    #[error("{a} is not coprime to {m}")]
    NotCoprime { a: String, m: String },
    #[error("value {0} exceeds the supported 64-bit width")]
    Overflow(String),
    #[error("minimal polynomial of degree {0} is not supported (max 4)")]
    UnsupportedDegree(usize),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("denominator {den} is not invertible modulo {modulus}")]
    DenominatorNotInvertible { den: String, modulus: String },
    #[error("residues live in different fields")]
    MismatchedField,
    #[error("series have different coefficient rings")]
    RingMismatch,
    #[error("weight {0} is not an even integer >= 2")]
    BadWeight(i64),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("insufficient precision: need {needed}, have {have}")]
    InsufficientPrecision { needed: usize, have: usize },
    #[error("eta product order {0}/24 is not a non-negative integer")]
    FractionalExponent(i64),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("coprimality failed: {0}")]
    CoprimalityFailed(String),
    #[error("ell = {0} is not in the table")]
    NotInTable(u64),
    #[error("construction degenerated: {0}")]
    Degenerate(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroInput => "ZeroInput",
            Error::NotCoprime { .. } => "NotCoprime",
            Error::Overflow(_) => "Overflow",
            Error::UnsupportedDegree(_) => "UnsupportedDegree",
            Error::NotMonic => "NotMonic",
            Error::DenominatorNotInvertible { .. } => "DenominatorNotInvertible",
            Error::MismatchedField => "MismatchedField",
            Error::RingMismatch => "RingMismatch",
            Error::BadWeight(_) => "BadWeight",
            Error::BadParameters(_) => "BadParameters",
            Error::InsufficientPrecision { .. } => "InsufficientPrecision",
            Error::FractionalExponent(_) => "FractionalExponent",
            Error::PreconditionFailed(_) => "PreconditionFailed",
            Error::CoprimalityFailed(_) => "CoprimalityFailed",
            Error::NotInTable(_) => "NotInTable",
            Error::Degenerate(_) => "Degenerate",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
