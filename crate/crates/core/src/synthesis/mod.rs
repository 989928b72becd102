//! Constructions of good orderings.
//!
//! Every public entry point checks its own output with
//! [`verify_pair`](crate::verify::verify_pair) and reports a failure as
//! [`Error::InvariantViolation`].

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BranchKind, BranchingPair, EdgeId, MultiGraph, Subgraph, Vertex, VertexOrdering};
use crate::verify::verify_pair;

mod circuit;
mod double_tree;
mod henneberg;
mod matching;
mod spanning;

pub use circuit::{circuit_good_ordering, find_two_cut, is_three_connected, two_separation, TwoSeparation};
pub use double_tree::{double_tree_good_ordering, DoubleTreeOutcome};
pub use henneberg::{find_admissible_moves, henneberg_move, lift_ordering, HennebergMove, MoveClass};
pub use matching::matching_good_ordering;
pub use spanning::{find_spanning_circuit, four_regular_spanning_circuit, spanning_circuit_good_ordering};

/// Prescribed roots and the branching that must contain edge `e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSpec {
    pub s: Vertex,
    pub t: Vertex,
    pub e: EdgeId,
    pub side: BranchKind,
}

impl RootSpec {
    pub fn check(&self, g: &MultiGraph) -> Result<()> {
        let n = g.vertex_count();
        for x in [self.s, self.t] {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
        }
        if self.s == self.t {
            return Err(Error::InvalidParameters("s and t coincide".into()));
        }
        let e = g.edge(self.e).ok_or(Error::UnknownEdge(self.e))?;
        if !e.touches(self.s) && !e.touches(self.t) {
            return Err(Error::InvalidParameters(format!("edge {} is incident with neither s nor t", self.e)));
        }
        Ok(())
    }
}

/// A good ordering together with branchings certifying it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodOrderingResult {
    pub ordering: VertexOrdering,
    pub pair: BranchingPair,
}

/// Flat JSON form of a [`GoodOrderingResult`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultDoc {
    pub order: Vec<Vertex>,
    pub out_branching: Vec<EdgeId>,
    pub in_branching: Vec<EdgeId>,
}

impl GoodOrderingResult {
    pub fn reversed(&self) -> GoodOrderingResult {
        GoodOrderingResult { ordering: self.ordering.reversed(), pair: self.pair.reversed() }
    }

    pub fn to_doc(&self) -> ResultDoc {
        ResultDoc {
            order: self.ordering.as_slice().to_vec(),
            out_branching: self.pair.out.arcs.iter().copied().collect(),
            in_branching: self.pair.inn.arcs.iter().copied().collect(),
        }
    }

    /// Rebuilds a result from its JSON form.
    pub fn from_doc(doc: &ResultDoc, n: usize) -> Result<GoodOrderingResult> {
        let ordering = VertexOrdering::new(doc.order.clone(), n)?;
        let (s, t) = match (ordering.first(), ordering.last()) {
            (Some(s), Some(t)) => (s, t),
            _ => return Err(Error::InvalidOrdering("empty ordering".into())),
        };
        let pair = BranchingPair::new(
            s,
            t,
            doc.out_branching.iter().copied().collect(),
            doc.in_branching.iter().copied().collect(),
        );
        Ok(GoodOrderingResult { ordering, pair })
    }

    pub fn verify(&self, g: &MultiGraph) -> std::result::Result<(), String> {
        verify_pair(g, &self.ordering, &self.pair)
    }
}

/// Working form used inside the recursions: vertices are labels of the
/// graph being solved, branchings are edge-id sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Raw {
    pub order: Vec<Vertex>,
    pub out: BTreeSet<EdgeId>,
    pub inn: BTreeSet<EdgeId>,
}

impl Raw {
    pub(crate) fn reversed(mut self) -> Raw {
        self.order.reverse();
        std::mem::swap(&mut self.out, &mut self.inn);
        self
    }

    /// Relabels the vertices of a solution of `sub` into the parent graph.
    pub(crate) fn lifted(mut self, sub: &Subgraph) -> Raw {
        for v in &mut self.order {
            *v = sub.parent[*v];
        }
        self
    }

    pub(crate) fn side_of(&self, id: EdgeId) -> Option<BranchKind> {
        if self.out.contains(&id) {
            Some(BranchKind::Out)
        } else if self.inn.contains(&id) {
            Some(BranchKind::In)
        } else {
            None
        }
    }

    pub(crate) fn into_result(self, n: usize) -> Result<GoodOrderingResult> {
        let ordering = VertexOrdering::new(self.order, n)
            .map_err(|e| Error::InvariantViolation(format!("construction produced a bad ordering: {e}")))?;
        let (s, t) = (ordering.first().unwrap_or(0), ordering.last().unwrap_or(0));
        Ok(GoodOrderingResult { ordering, pair: BranchingPair::new(s, t, self.out, self.inn) })
    }
}

/// Self-check applied to every constructed result.
pub(crate) fn certify(g: &MultiGraph, res: GoodOrderingResult, spec: Option<&RootSpec>) -> Result<GoodOrderingResult> {
    if let Err(why) = res.verify(g) {
        return Err(Error::InvariantViolation(format!("constructed certificate fails: {why}")));
    }
    if let Some(spec) = spec {
        if res.pair.s() != spec.s || res.pair.t() != spec.t {
            return Err(Error::InvariantViolation("constructed certificate has the wrong roots".into()));
        }
        let set = match spec.side {
            BranchKind::Out => &res.pair.out.arcs,
            BranchKind::In => &res.pair.inn.arcs,
        };
        if !set.contains(&spec.e) {
            return Err(Error::InvariantViolation(format!("edge {} is not on the requested side", spec.e)));
        }
    }
    Ok(res)
}

/// Id of some edge joining `a` and `b`.
pub(crate) fn edge_between(g: &MultiGraph, a: Vertex, b: Vertex) -> Result<EdgeId> {
    g.edges_between(a, b)
        .next()
        .map(|e| e.id)
        .ok_or_else(|| Error::InvariantViolation(format!("no edge between {a} and {b}")))
}
