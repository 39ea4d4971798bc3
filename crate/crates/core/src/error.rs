use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("temporal graph needs at least one vertex")]
    NoVertices,

    #[error("arc {index}: endpoint {vertex} out of range (vertex count {vertex_count})")]
    EndpointOutOfRange {
        index: usize,
        vertex: VertexId,
        vertex_count: usize,
    },

    #[error("arc {index}: time label or traversal time exceeds the supported maximum")]
    TimeOutOfRange { index: usize },

    #[error("route is empty")]
    EmptyRoute,

    #[error("route repeats vertex {0}")]
    RepeatedVertex(VertexId),

    #[error("vertex {vertex} out of range (vertex count {vertex_count})")]
    VertexOutOfRange {
        vertex: VertexId,
        vertex_count: usize,
    },

    #[error("walk is not contiguous at position {position}")]
    NonContiguousWalk { position: usize },

    #[error("arc reference {0} does not exist")]
    UnknownArc(usize),

    #[error("arrival vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("instance too large for oracle: {0}")]
    TooLarge(String),

    #[error("timed feedback vertex set search exceeded its budget; supply the set explicitly")]
    TfvsBudgetExceeded,

    #[error("supplied appearance set is not a timed feedback vertex set")]
    NotATimedFeedbackVertexSet,

    #[error("formula literal references missing variable ({class}, {var})")]
    UnknownVariable { class: usize, var: usize },

    #[error("choice vector has {got} entries for {expected} classes")]
    ChoiceArity { expected: usize, got: usize },

    #[error("layout is not a permutation of the vertex set")]
    InvalidLayout,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
