use thiserror::Error;

/// Errors raised by the algebra, curve and bundle layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus is reducible over GF(2)")]
    ReducibleModulus,
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("no field embedding GF(2^{from}) -> GF(2^{to})")]
    NoEmbedding { from: u32, to: u32 },
    #[error("division by zero")]
    DivZero,
    #[error("linear system has no solution")]
    NoSolution,
    #[error("matrix is not square")]
    NotSquare,
    #[error("singular model: {0}")]
    Singular(String),
    #[error("valuation of the zero element")]
    ZeroElement,
    #[error("field too large for exhaustive work: {0}")]
    TooLarge(String),
    #[error("unsupported divisor support: {0}")]
    UnsupportedSupport(String),
    #[error("B1 is not unique among the theta characteristics ({0} candidates)")]
    B1NotUnique(usize),
    #[error("no theta characteristic has a Frobenius kernel on H^1")]
    B1NotFound,
    #[error("class is not 2-torsion")]
    NotTwoTorsion,
    #[error("assertion failed in {check}: {detail}")]
    AssertionFailed { check: String, detail: String },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
