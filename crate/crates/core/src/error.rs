use thiserror::Error;

/// Errors raised by the constructions and checks in this crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension {dim} exceeds the supported bound {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("expected {expected} coordinates, found {found}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("lattice basis is not of full rank in its span")]
    NotFullRank,

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("vector is not contained in the lattice")]
    NotContained,

    #[error("index is not an integer: det ratio {0}")]
    NonSquareIndex(String),

    #[error("vector is not representable with integer coordinates in the frame")]
    NotInFrame,

    #[error("enumeration of ~{predicted} vectors exceeds the ceiling of {ceiling}")]
    ResourceLimit { predicted: u64, ceiling: u64 },

    #[error("map is not an automorphism: {0}")]
    NotAutomorphism(String),

    #[error("quadratic form is invalid: {0}")]
    InvalidForm(String),

    #[error("bilinear form has a nonzero radical of dimension {0}")]
    SingularForm(usize),

    #[error("series exponent grid violated: {0}")]
    ExponentGrid(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("cache I/O: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
