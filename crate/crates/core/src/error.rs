use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("vertex {vertex} is out of range 1..={m}")]
    OutOfRange { vertex: usize, m: usize },

    #[error("ghost vertex {0}: singletons cannot be minimal non-faces")]
    GhostVertex(usize),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("{face:?} is not a maximal face")]
    NotMaximalFace { face: Vec<usize> },

    #[error("degree {degree} out of range {min}..={max}")]
    DegreeOutOfRange { degree: i64, min: i64, max: i64 },

    #[error("capacity exceeded ({guard}): {value} > {bound}")]
    Capacity {
        guard: &'static str,
        value: usize,
        bound: usize,
    },

    #[error("cochains live over different complexes")]
    AmbientMismatch,

    #[error("cochain is not a cocycle")]
    NotACocycle,

    #[error("cochain is not homogeneous in multidegree and total degree")]
    NotHomogeneous,

    #[error("Massey product is not defined")]
    NotDefined,
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. })
    }
}
