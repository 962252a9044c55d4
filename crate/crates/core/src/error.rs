use thiserror::Error;

/// Errors raised by the arithmetic, lattice and expansion layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("inversion of (apparent) zero")]
    InversionOfZero,
    #[error("non-convergent product: {0}")]
    NonConvergentProduct(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("singular matrix")]
    Singular,
    #[error("not a sublattice")]
    NotSublattice,
    #[error("enumeration budget exceeded: {attempted} candidates > budget {budget}")]
    BudgetExceeded { attempted: u128, budget: u128 },
    #[error("{0} is not irreducible")]
    Reducible(String),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("invalid index type: {0}")]
    InvalidIndexType(String),
    #[error("mixed-prime support: {0}")]
    MixedPrimeSupport(String),
    #[error("determinant is not a unit times p")]
    WrongDeterminant,
    #[error("linearly dependent basis")]
    DependentBasis,
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("torsion certificate failed: {0}")]
    TorsionCertificate(String),
    #[error("oracle disagreement: {0}")]
    OracleDisagreement(String),
    #[error("insufficient data: {0}")]
    Insufficient(String),
}

pub type Result<T> = std::result::Result<T, Error>;
