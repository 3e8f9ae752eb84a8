use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CremonaError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {0} is out of range (must be < 2^31)")]
    CharacteristicTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("polynomials have different coefficient domains or variable counts")]
    DomainMismatch,
    #[error("expected {expected} arguments, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("maps act on projective spaces of different dimensions")]
    DimensionMismatch,
    #[error("matrix sizes differ")]
    SizeMismatch,
    #[error("every component of the tuple is zero")]
    ZeroTuple,
    #[error("invalid tuple: {0}")]
    InvalidTuple(String),
    #[error("composition collapsed to a degenerate tuple")]
    DegenerateComposition,
    #[error("degenerate specialization: {0}")]
    DegenerateSpecialization(String),
    #[error("map carries no inverse certificate")]
    MissingInverse,
    #[error("point is not fixed by the map")]
    NotFixed,
    #[error("map is indeterminate at the point")]
    IndeterminateAtPoint,
    #[error("map is not a local isomorphism at the point")]
    NotLocalIso,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("determinant is not 1")]
    DeterminantNotOne,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("unsupported field size {0}")]
    UnsupportedFieldSize(u32),
    #[error("operation needs an infinite field; F_{0} is not supported")]
    UnsupportedField(u32),
    #[error("no suitable point found up to height {0}")]
    SearchExhausted(u64),
    #[error("no suitable alpha found within the search bound")]
    NoSuitableAlpha,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, CremonaError>;
