use thiserror::Error;

use crate::diagnostics::Refutation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("loop at vertex {0}")]
    Loop(usize),

    #[error("unknown edge id {0}")]
    UnknownEdge(usize),

    #[error("invalid ordering: {0}")]
    InvalidOrdering(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("vertex set is empty")]
    EmptySet,

    #[error("unsupported sparsity parameters (k, l) = ({k}, {l})")]
    UnsupportedParameters { k: u32, l: u32 },

    #[error("graph has {0} vertices; at least 2 are required")]
    TrivialGraph(usize),

    /// The input is not a 2T-graph; the refutation says why.
    #[error("not a 2T-graph")]
    NotTwoTree(Box<Refutation>),

    #[error("input has the wrong shape: {0}")]
    WrongShape(String),

    #[error("invalid Henneberg move: {0}")]
    InvalidMove(String),

    #[error("certificate does not verify: {0}")]
    InvalidCertificate(String),

    #[error("{{{a}, {b}}} does not separate the graph")]
    NotACut { a: usize, b: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("instance too large for exhaustive search: {size} > {bound}")]
    BoundExceeded { size: usize, bound: usize },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    /// An internal self-check failed. Always a bug, never a property of the input.
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
