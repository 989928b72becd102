//! JSON documents for graphs, digraphs and orderings.
//!
//! Graphs are `{"format": 1, "n": 4, "edges": [[0, 1], ...]}` with edge id
//! equal to the array index. Orderings are `{"format": 1, "order": [...]}`.
//! The `format` field may be omitted on input.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Digraph, MultiGraph, Vertex, VertexOrdering};

pub const FORMAT: u32 = 1;

fn default_format() -> u32 {
    FORMAT
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    #[serde(default = "default_format")]
    pub format: u32,
    pub n: usize,
    pub edges: Vec<[Vertex; 2]>,
}

impl GraphDoc {
    /// Document for `g` with edges in id order.
    pub fn from_graph(g: &MultiGraph) -> Self {
        GraphDoc { format: FORMAT, n: g.vertex_count(), edges: g.edges().iter().map(|e| [e.u, e.v]).collect() }
    }

    /// Canonical document: edges written `[min, max]` and sorted.
    pub fn canonical(g: &MultiGraph) -> Self {
        GraphDoc::from_graph(&g.canonical())
    }

    pub fn to_graph(&self) -> Result<MultiGraph> {
        check_format(self.format)?;
        let pairs: Vec<(Vertex, Vertex)> = self.edges.iter().map(|&[u, v]| (u, v)).collect();
        MultiGraph::from_edges(self.n, &pairs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigraphDoc {
    #[serde(default = "default_format")]
    pub format: u32,
    pub n: usize,
    pub arcs: Vec<[Vertex; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Vertex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Vertex>,
}

impl DigraphDoc {
    pub fn from_digraph(d: &Digraph, s: Option<Vertex>, t: Option<Vertex>) -> Self {
        DigraphDoc { format: FORMAT, n: d.vertex_count(), arcs: d.arcs().iter().map(|a| [a.tail, a.head]).collect(), s, t }
    }

    pub fn to_digraph(&self) -> Result<Digraph> {
        check_format(self.format)?;
        let pairs: Vec<(Vertex, Vertex)> = self.arcs.iter().map(|&[u, v]| (u, v)).collect();
        Digraph::from_arcs(self.n, &pairs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderingDoc {
    #[serde(default = "default_format")]
    pub format: u32,
    pub order: Vec<Vertex>,
}

impl OrderingDoc {
    pub fn from_ordering(ord: &VertexOrdering) -> Self {
        OrderingDoc { format: FORMAT, order: ord.as_slice().to_vec() }
    }

    pub fn to_ordering(&self, n: usize) -> Result<VertexOrdering> {
        check_format(self.format)?;
        VertexOrdering::new(self.order.clone(), n)
    }
}

pub(crate) fn check_format(format: u32) -> Result<()> {
    if format != FORMAT {
        return Err(Error::WrongShape(format!("unsupported document format {format}")));
    }
    Ok(())
}

pub fn parse_graph(text: &str) -> Result<MultiGraph> {
    serde_json::from_str::<GraphDoc>(text)?.to_graph()
}

pub fn graph_to_json(g: &MultiGraph) -> String {
    serde_json::to_string(&GraphDoc::from_graph(g)).expect("graph documents serialize")
}
