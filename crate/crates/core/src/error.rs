use thiserror::Error;

/// Errors raised by the exact engine and the numeric oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("missing assignment for atom {0}")]
    MissingAssignment(String),
    #[error("derivative table exhausted: no x_n-derivative rule for {0}")]
    DerivativeTableExhausted(String),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("wrong length: expected {expected}, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("expected a grade-1 Clifford element")]
    NotAVector,
    #[error("polynomial part present: numerator degree {degree} with pole orders ({p}, {q})")]
    PolynomialPart { degree: u32, p: u32, q: u32 },
    #[error("non-integrable at infinity: numerator degree {degree} with pole orders ({p}, {q})")]
    NonIntegrable { degree: u32, p: u32, q: u32 },
    #[error("operation needs the unrestricted |xi|^2 denominator")]
    NeedsUnrestricted,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("contour hits singularity")]
    ContourSingularity,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
