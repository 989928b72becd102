//! Two-tree graphs, generic rigidity circuits and good orderings.
//!
//! A 2T-graph is the union of two edge-disjoint spanning trees. A good
//! ordering of such a graph is a vertex order whose induced acyclic
//! orientation contains an out-branching from the first vertex and an
//! in-branching to the last vertex that share no arc.

pub mod atlas;
pub mod diagnostics;
pub mod error;
pub mod generators;
pub mod graph;
pub mod hardness;
pub mod io;
pub mod sparsity;
pub mod synthesis;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{
    orient_by_ordering, BranchKind, Branching, BranchingPair, Digraph, Edge, EdgeId, MultiGraph, Provenance,
    Vertex, VertexOrdering,
};
