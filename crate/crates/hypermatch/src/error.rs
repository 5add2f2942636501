//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("vertex {vertex} out of range [0, {n})")]
    VertexOutOfRange { vertex: u32, n: usize },

    #[error("vertex count {n} exceeds supported maximum {max}")]
    TooManyVertices { n: usize, max: usize },

    #[error("edge {0:?} has wrong arity or repeated vertices (expected {1} distinct)")]
    BadEdge(Vec<u32>, usize),

    #[error("duplicate edge {0:?}")]
    DuplicateEdge(Vec<u32>),

    #[error("invalid probability {0} (must lie in [0, 1])")]
    InvalidProbability(f64),

    #[error("invalid sizes: {0}")]
    InvalidSizes(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vector {0:?} is not in the ambient divisibility lattice (coordinate sum not divisible by {1})")]
    NotInAmbientLattice(Vec<i64>, i64),

    #[error("integer overflow in exact arithmetic")]
    Overflow,

    #[error("invalid rational constant: {0}")]
    BadFraction(String),

    #[error("no valid relocation target for vertex {vertex}")]
    RelocationFailed { vertex: u32 },

    #[error("cluster redistribution has no full placement; unplaceable vertices {0:?}")]
    RedistributionStuck(Vec<u32>),

    #[error("residue correction failed at cluster {cluster}: {msg}")]
    ResidueCorrection { cluster: usize, msg: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("edge oracle failure: {0}")]
    Oracle(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
