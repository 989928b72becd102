//! Multigraph and digraph value types.
//!
//! Vertices are dense indices `0..n`. Edges carry a stable integer id which
//! survives taking induced subgraphs and contracting partitions, so a
//! branching (a set of edge ids) computed on a piece can always be read back
//! in the parent graph. Every graph also remembers, per vertex, the name of
//! that vertex in the root graph it was derived from.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;
pub type EdgeId = usize;

/// Where an edge came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Original,
    /// Added by a 2-separation or a reduction step; the payload identifies the step.
    Virtual(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: EdgeId,
    pub u: Vertex,
    pub v: Vertex,
    pub provenance: Provenance,
}

impl Edge {
    pub fn touches(&self, x: Vertex) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint that is not `x`. `x` must be an endpoint.
    pub fn other(&self, x: Vertex) -> Vertex {
        if self.u == x {
            self.v
        } else {
            debug_assert_eq!(self.v, x);
            self.u
        }
    }

    pub fn joins(&self, a: Vertex, b: Vertex) -> bool {
        (self.u == a && self.v == b) || (self.u == b && self.v == a)
    }
}

/// Undirected loopless multigraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    n: usize,
    // Sorted by id.
    edges: Vec<Edge>,
    names: Vec<usize>,
}

impl MultiGraph {
    pub fn new(n: usize) -> Self {
        MultiGraph { n, edges: Vec::new(), names: (0..n).collect() }
    }

    /// Builds a graph whose edge ids are the positions in `pairs`.
    pub fn from_edges(n: usize, pairs: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut g = MultiGraph::new(n);
        for &(u, v) in pairs {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.iter().map(|e| e.id)
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.binary_search_by_key(&id, |e| e.id).ok().map(|i| &self.edges[i])
    }

    pub fn has_edge(&self, id: EdgeId) -> bool {
        self.edge(id).is_some()
    }

    /// Name of each vertex in the root graph.
    pub fn names(&self) -> &[usize] {
        &self.names
    }

    pub fn name(&self, v: Vertex) -> usize {
        self.names[v]
    }

    /// Smallest id strictly larger than every id in use.
    pub fn next_edge_id(&self) -> EdgeId {
        self.edges.last().map_or(0, |e| e.id + 1)
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<EdgeId> {
        self.add_edge_with(u, v, Provenance::Original)
    }

    pub fn add_edge_with(&mut self, u: Vertex, v: Vertex, provenance: Provenance) -> Result<EdgeId> {
        let id = self.next_edge_id();
        self.push_edge(Edge { id, u, v, provenance })?;
        Ok(id)
    }

    fn check_vertex(&self, x: Vertex) -> Result<()> {
        if x >= self.n {
            Err(Error::VertexOutOfRange { vertex: x, n: self.n })
        } else {
            Ok(())
        }
    }

    fn push_edge(&mut self, e: Edge) -> Result<()> {
        self.check_vertex(e.u)?;
        self.check_vertex(e.v)?;
        if e.u == e.v {
            return Err(Error::Loop(e.u));
        }
        debug_assert!(self.edges.last().is_none_or(|l| l.id < e.id));
        self.edges.push(e);
        Ok(())
    }

    /// Adds a vertex and returns it; its root name is `name`.
    pub fn add_vertex_named(&mut self, name: usize) -> Vertex {
        self.n += 1;
        self.names.push(name);
        self.n - 1
    }

    pub fn degree(&self, x: Vertex) -> usize {
        self.edges.iter().filter(|e| e.touches(x)).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for e in &self.edges {
            d[e.u] += 1;
            d[e.v] += 1;
        }
        d
    }

    /// Incidence lists: for each vertex, `(edge id, other endpoint)`.
    pub fn incidence(&self) -> Vec<Vec<(EdgeId, Vertex)>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.u].push((e.id, e.v));
            adj[e.v].push((e.id, e.u));
        }
        adj
    }

    /// Distinct neighbours of `x`, sorted.
    pub fn neighbours(&self, x: Vertex) -> Vec<Vertex> {
        let set: BTreeSet<Vertex> =
            self.edges.iter().filter(|e| e.touches(x)).map(|e| e.other(x)).collect();
        set.into_iter().collect()
    }

    /// Edges with both endpoints in `set` (given as a membership mask).
    pub fn count_edges_within(&self, inside: &[bool]) -> usize {
        self.edges.iter().filter(|e| inside[e.u] && inside[e.v]).count()
    }

    pub fn edges_between(&self, a: Vertex, b: Vertex) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.joins(a, b))
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges.iter().all(|e| seen.insert((e.u.min(e.v), e.u.max(e.v))))
    }

    /// Connected components of the graph with the vertices in `removed` deleted.
    /// Deleted vertices get component `usize::MAX`.
    pub fn components_without(&self, removed: &[Vertex]) -> (usize, Vec<usize>) {
        let adj = self.incidence();
        let mut comp = vec![usize::MAX; self.n];
        let mut gone = vec![false; self.n];
        for &r in removed {
            gone[r] = true;
        }
        let mut count = 0;
        for start in 0..self.n {
            if gone[start] || comp[start] != usize::MAX {
                continue;
            }
            comp[start] = count;
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &(_, y) in &adj[x] {
                    if !gone[y] && comp[y] == usize::MAX {
                        comp[y] = count;
                        queue.push_back(y);
                    }
                }
            }
            count += 1;
        }
        (count, comp)
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components_without(&[]).0 == 1
    }

    /// Copy of the graph without the given edges.
    pub fn without_edges(&self, ids: &[EdgeId]) -> MultiGraph {
        let mut g = self.clone();
        g.edges.retain(|e| !ids.contains(&e.id));
        g
    }

    /// Canonical form: every edge written as `(min, max)`, edges sorted, ids
    /// renumbered `0..m`. Provenance and names are reset.
    pub fn canonical(&self) -> MultiGraph {
        let mut pairs: Vec<(Vertex, Vertex)> =
            self.edges.iter().map(|e| (e.u.min(e.v), e.u.max(e.v))).collect();
        pairs.sort_unstable();
        MultiGraph::from_edges(self.n, &pairs).expect("edges of a valid graph")
    }

    pub fn edge_pairs(&self) -> Vec<(Vertex, Vertex)> {
        self.edges.iter().map(|e| (e.u, e.v)).collect()
    }
}

/// An arc of a digraph. `edge` records the undirected edge it orients, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arc {
    pub id: usize,
    pub tail: Vertex,
    pub head: Vertex,
    pub edge: Option<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    arcs: Vec<Arc>,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Digraph { n, arcs: Vec::new() }
    }

    pub fn from_arcs(n: usize, pairs: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut d = Digraph::new(n);
        for &(t, h) in pairs {
            d.add_arc(t, h)?;
        }
        Ok(d)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, id: usize) -> Option<&Arc> {
        self.arcs.binary_search_by_key(&id, |a| a.id).ok().map(|i| &self.arcs[i])
    }

    pub fn add_arc(&mut self, tail: Vertex, head: Vertex) -> Result<usize> {
        let id = self.arcs.last().map_or(0, |a| a.id + 1);
        self.push_arc(Arc { id, tail, head, edge: None })?;
        Ok(id)
    }

    fn push_arc(&mut self, a: Arc) -> Result<()> {
        for x in [a.tail, a.head] {
            if x >= self.n {
                return Err(Error::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        if a.tail == a.head {
            return Err(Error::Loop(a.tail));
        }
        self.arcs.push(a);
        Ok(())
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for a in &self.arcs {
            d[a.head] += 1;
        }
        d
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for a in &self.arcs {
            d[a.tail] += 1;
        }
        d
    }

    /// Arc ids leaving each vertex.
    pub fn out_arcs(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n];
        for a in &self.arcs {
            out[a.tail].push(a.id);
        }
        out
    }

    /// Arc ids entering each vertex.
    pub fn in_arcs(&self) -> Vec<Vec<usize>> {
        let mut inn = vec![Vec::new(); self.n];
        for a in &self.arcs {
            inn[a.head].push(a.id);
        }
        inn
    }

    /// A topological order, or `None` if there is a directed cycle.
    pub fn topological_order(&self) -> Option<Vec<Vertex>> {
        let mut indeg = self.in_degrees();
        let mut succ = vec![Vec::new(); self.n];
        for a in &self.arcs {
            succ[a.tail].push(a.head);
        }
        let mut ready: VecDeque<Vertex> = (0..self.n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(x) = ready.pop_front() {
            order.push(x);
            for &y in &succ[x] {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    ready.push_back(y);
                }
            }
        }
        (order.len() == self.n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Same digraph with every arc reversed.
    pub fn reversed(&self) -> Digraph {
        Digraph {
            n: self.n,
            arcs: self
                .arcs
                .iter()
                .map(|a| Arc { tail: a.head, head: a.tail, ..*a })
                .collect(),
        }
    }
}

/// A total order of the vertices; position 0 is first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexOrdering {
    order: Vec<Vertex>,
}

impl VertexOrdering {
    pub fn new(order: Vec<Vertex>, n: usize) -> Result<Self> {
        if order.len() != n {
            return Err(Error::InvalidOrdering(format!(
                "ordering has {} entries, graph has {} vertices",
                order.len(),
                n
            )));
        }
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n || seen[v] {
                return Err(Error::InvalidOrdering(format!("vertex {v} is out of range or repeated")));
            }
            seen[v] = true;
        }
        Ok(VertexOrdering { order })
    }

    pub fn identity(n: usize) -> Self {
        VertexOrdering { order: (0..n).collect() }
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.order
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn first(&self) -> Option<Vertex> {
        self.order.first().copied()
    }

    pub fn last(&self) -> Option<Vertex> {
        self.order.last().copied()
    }

    /// `positions()[v]` is the index of `v` in the order.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    pub fn reversed(&self) -> VertexOrdering {
        VertexOrdering { order: self.order.iter().rev().copied().collect() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchKind {
    Out,
    In,
}

impl BranchKind {
    pub fn flipped(self) -> BranchKind {
        match self {
            BranchKind::Out => BranchKind::In,
            BranchKind::In => BranchKind::Out,
        }
    }
}

/// A spanning out- or in-branching, stored as the set of edge ids it uses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branching {
    pub root: Vertex,
    pub kind: BranchKind,
    pub arcs: BTreeSet<EdgeId>,
}

/// Arc-disjoint out-branching (rooted at `s`) and in-branching (rooted at `t`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchingPair {
    pub out: Branching,
    pub inn: Branching,
}

impl BranchingPair {
    pub fn new(s: Vertex, t: Vertex, out: BTreeSet<EdgeId>, inn: BTreeSet<EdgeId>) -> Self {
        BranchingPair {
            out: Branching { root: s, kind: BranchKind::Out, arcs: out },
            inn: Branching { root: t, kind: BranchKind::In, arcs: inn },
        }
    }

    pub fn s(&self) -> Vertex {
        self.out.root
    }

    pub fn t(&self) -> Vertex {
        self.inn.root
    }

    /// The pair certifying the reversed ordering: roles of the branchings swap.
    pub fn reversed(&self) -> BranchingPair {
        BranchingPair::new(self.inn.root, self.out.root, self.inn.arcs.clone(), self.out.arcs.clone())
    }
}

/// Orients every edge from the earlier to the later endpoint. Arc ids equal edge ids.
pub fn orient_by_ordering(g: &MultiGraph, ord: &VertexOrdering) -> Result<Digraph> {
    if ord.len() != g.vertex_count() {
        return Err(Error::InvalidOrdering(format!(
            "ordering has {} entries, graph has {} vertices",
            ord.len(),
            g.vertex_count()
        )));
    }
    let pos = ord.positions();
    let arcs = g
        .edges()
        .iter()
        .map(|e| {
            let (tail, head) = if pos[e.u] < pos[e.v] { (e.u, e.v) } else { (e.v, e.u) };
            Arc { id: e.id, tail, head, edge: Some(e.id) }
        })
        .collect();
    Ok(Digraph { n: g.vertex_count(), arcs })
}

/// Result of contracting a vertex partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contraction {
    pub graph: MultiGraph,
    /// `part_of[v]` is the contracted vertex that `v` went to.
    pub part_of: Vec<Vertex>,
}

/// Contracts each part to one vertex, dropping edges inside a part. Cross
/// edges keep their ids and provenance; part `i` becomes vertex `i`.
pub fn contract_partition(g: &MultiGraph, parts: &[Vec<Vertex>]) -> Result<Contraction> {
    let n = g.vertex_count();
    let mut part_of = vec![usize::MAX; n];
    for (i, part) in parts.iter().enumerate() {
        if part.is_empty() {
            return Err(Error::InvalidPartition(format!("part {i} is empty")));
        }
        for &v in part {
            if v >= n {
                return Err(Error::InvalidPartition(format!("vertex {v} out of range")));
            }
            if part_of[v] != usize::MAX {
                return Err(Error::InvalidPartition(format!("vertex {v} appears twice")));
            }
            part_of[v] = i;
        }
    }
    if let Some(v) = part_of.iter().position(|&p| p == usize::MAX) {
        return Err(Error::InvalidPartition(format!("vertex {v} is not covered")));
    }
    let mut q = MultiGraph::new(parts.len());
    for e in g.edges() {
        let (a, b) = (part_of[e.u], part_of[e.v]);
        if a != b {
            q.push_edge(Edge { id: e.id, u: a, v: b, provenance: e.provenance })?;
        }
    }
    Ok(Contraction { graph: q, part_of })
}

/// Induced subgraph together with the parent vertex of each local vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    pub graph: MultiGraph,
    /// `parent[i]` is the vertex of the parent graph that local vertex `i` stands for.
    pub parent: Vec<Vertex>,
}

impl Subgraph {
    /// Local index of a parent vertex, if present.
    pub fn local(&self, v: Vertex) -> Option<Vertex> {
        self.parent.binary_search(&v).ok()
    }
}

/// Subgraph induced by `set`. Local vertices follow the sorted order of `set`.
pub fn induced_subgraph(g: &MultiGraph, set: &[Vertex]) -> Result<MultiGraph> {
    induced(g, set).map(|s| s.graph)
}

pub fn induced(g: &MultiGraph, set: &[Vertex]) -> Result<Subgraph> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut parent: Vec<Vertex> = set.to_vec();
    parent.sort_unstable();
    parent.dedup();
    let mut local = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in parent.iter().enumerate() {
        if v >= g.vertex_count() {
            return Err(Error::VertexOutOfRange { vertex: v, n: g.vertex_count() });
        }
        local[v] = i;
    }
    let mut sub = MultiGraph::new(parent.len());
    sub.names = parent.iter().map(|&v| g.name(v)).collect();
    for e in g.edges() {
        if local[e.u] != usize::MAX && local[e.v] != usize::MAX {
            sub.push_edge(Edge { id: e.id, u: local[e.u], v: local[e.v], provenance: e.provenance })?;
        }
    }
    Ok(Subgraph { graph: sub, parent })
}

/// Builds a graph from explicit edges (ids must be strictly increasing after sorting).
pub(crate) fn graph_from_edge_list(n: usize, mut edges: Vec<Edge>, names: Vec<usize>) -> Result<MultiGraph> {
    edges.sort_by_key(|e| e.id);
    if edges.windows(2).any(|w| w[0].id == w[1].id) {
        return Err(Error::InvariantViolation("duplicate edge id".into()));
    }
    let mut g = MultiGraph::new(n);
    g.names = names;
    for e in edges {
        g.push_edge(e)?;
    }
    Ok(g)
}
