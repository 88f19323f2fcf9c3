use thiserror::Error;

/// Errors raised by the library. Witness data is carried as basis labels
/// wherever a basis is available.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("structure constants are not associative at ({0}, {1}, {2})")]
    NotAssociative(String, String, String),

    #[error("claimed unit does not act as identity on basis element {0}")]
    BadUnit(String),

    #[error("unsupported name: {0}")]
    UnsupportedName(String),

    #[error("elements belong to different algebras")]
    ParentMismatch,

    #[error("pair {index} is not a multiplier: {witness}")]
    NotMultiplier { index: usize, witness: String },

    #[error("acting map is not a homomorphism at (w{0}, w{1})")]
    NotHomomorphism(usize, usize),

    #[error("action is not permutable: rho(w{1}) and lambda(w{0}) do not commute")]
    NotPermutable(usize, usize),

    #[error("unit of W does not act as the identity pair")]
    UnitMismatch,

    #[error("span of the given elements is not closed under multiplication: {0}")]
    NotClosed(String),

    #[error("algebra is not split over the rationals: {0}")]
    NotSplit(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown coefficient label: {0}")]
    UnknownCoefficient(String),

    #[error("variable x{0} has no assigned value")]
    UnassignedVariable(u32),

    #[error("budget exceeded: {rows} rows x {cols} columns (row limit {limit})")]
    BudgetExceeded { rows: u128, cols: u128, limit: u128 },

    #[error("actions use incompatible W presentations: {0}")]
    BasisMismatch(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
