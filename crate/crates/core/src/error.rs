use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension {dim} is outside the supported range 1..={max}")]
    UnsupportedDimension { dim: usize, max: usize },

    #[error("coordinate {coord} is out of range for dimension {dim}")]
    CoordinateOutOfRange { coord: usize, dim: usize },

    #[error("spread must be at least 1, got {0}")]
    InvalidSpread(usize),

    #[error("unknown character {ch:?} at line {line}, column {column}")]
    UnknownCharacter { ch: char, line: usize, column: usize },

    #[error("coordinate {coord} ({ch:?}) at line {line}, column {column} is out of range for dimension {dim}")]
    CharacterOutOfRange {
        ch: char,
        coord: usize,
        dim: usize,
        line: usize,
        column: usize,
    },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("sequence does not close: coordinate {0} changes an odd number of times")]
    NotClosed(usize),

    #[error("spread violated between positions {i} and {j} (distance {distance})")]
    SpreadViolation { i: usize, j: usize, distance: u32 },

    #[error("coil needs at least 4 changes, got {0}")]
    CoilTooShort(usize),

    #[error("empty sequence")]
    EmptySequence,

    #[error("expected a coil")]
    NotACoil,

    #[error("pop on empty checker history")]
    EmptyHistory,

    #[error("coordinate {0} is already assigned")]
    AlreadyAssigned(usize),

    #[error("dimension {dim} exceeds the limit {max} of the exhaustive automorphism strategy")]
    CapabilityExceeded { dim: usize, max: usize },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("malformed record: {0}")]
    MalformedRecord(String),
}
