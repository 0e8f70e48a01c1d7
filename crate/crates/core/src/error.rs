//! Error types shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, AlgebraError>;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("{0} is not a prime below 2^31")]
    NotAPrime(u64),

    #[error("division by zero")]
    DivisionByZero,

    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("polynomial parse error: {0}")]
    Parse(String),

    #[error("ring mismatch: operands live over different rings")]
    RingMismatch,

    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("not a factorization: product entry ({row},{col}) of {which} is `{entry}`, expected `{expected}`")]
    NotAFactorization {
        which: &'static str,
        row: usize,
        col: usize,
        entry: String,
        expected: String,
    },

    #[error("potential mismatch: `{0}` vs `{1}`")]
    PotentialMismatch(String, String),

    #[error("morphism is not closed")]
    NotClosed,

    #[error("ill-defined ring map: defining ideal generator `{0}` does not map to zero")]
    IllDefinedRingMap(String),

    #[error("potential `{0}` is not a unit")]
    PotentialNotUnit(String),

    #[error("potential `{0}` is not zero")]
    PotentialNotZero(String),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("composition is nonzero at entry ({0},{1})")]
    CompositionNonzero(usize, usize),

    #[error("`{0}` does not divide exactly: remainder `{1}`")]
    NotDivisible(String, String),

    #[error("map is not surjective: basis vector {0} is not in the column span")]
    NotSurjective(usize),

    #[error("{0}")]
    Invalid(String),
}
