//! Circuit structure of a 2T-graph: generic circuits, generic components,
//! the quotient obtained by contracting components, and hyperpath shape.
//!
//! In a 2T-graph every generic circuit is an induced subgraph and distinct
//! circuits share no edge, so circuits are stored as vertex sets.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::diagnostics::Refutation;
use crate::error::{Error, Result};
use crate::graph::{contract_partition, Edge, EdgeId, MultiGraph, Vertex};
use crate::sparsity::{fundamental_circuit, greedy_circuits, is_2t, TwoTreeVerdict, UnionFind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    /// A single vertex lying in no circuit.
    Trivial,
    /// A maximal connected union of circuits.
    Nontrivial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub vertices: Vec<Vertex>,
    pub kind: ComponentKind,
    /// Indices into [`CircuitAtlas::circuits`].
    pub circuits: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CircuitAtlas {
    /// Sorted vertex sets, sorted lexicographically.
    pub circuits: Vec<Vec<Vertex>>,
    /// Ordered by smallest vertex.
    pub components: Vec<Component>,
    pub component_of: Vec<usize>,
    /// Components contracted; vertex `i` is component `i`. Edge ids are kept.
    #[serde(skip)]
    pub quotient: MultiGraph,
    /// Circuits containing each vertex.
    pub circuits_at: Vec<Vec<usize>>,
}

/// Fails with a refutation unless `g` is a 2T-graph.
pub(crate) fn require_2t(g: &MultiGraph) -> Result<()> {
    match is_2t(g)? {
        TwoTreeVerdict::Certificate(_) => Ok(()),
        verdict => Err(Error::NotTwoTree(Box::new(Refutation::NotTwoTree { verdict }))),
    }
}

impl CircuitAtlas {
    pub fn build(g: &MultiGraph) -> Result<Self> {
        require_2t(g)?;
        let n = g.vertex_count();
        let circuits = circuits_of_2t(g)?;
        let mut circuits_at = vec![Vec::new(); n];
        for (i, c) in circuits.iter().enumerate() {
            for &v in c {
                circuits_at[v].push(i);
            }
        }
        let mut uf = UnionFind::new(n);
        for c in &circuits {
            for w in c.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        let mut component_of = vec![usize::MAX; n];
        let mut components: Vec<Component> = Vec::new();
        let mut root_index = vec![usize::MAX; n];
        for v in 0..n {
            let r = uf.find(v);
            if root_index[r] == usize::MAX {
                root_index[r] = components.len();
                components.push(Component { vertices: Vec::new(), kind: ComponentKind::Trivial, circuits: Vec::new() });
            }
            component_of[v] = root_index[r];
            components[root_index[r]].vertices.push(v);
        }
        for (i, c) in circuits.iter().enumerate() {
            let k = component_of[c[0]];
            components[k].kind = ComponentKind::Nontrivial;
            components[k].circuits.push(i);
        }
        let parts: Vec<Vec<Vertex>> = components.iter().map(|c| c.vertices.clone()).collect();
        let quotient = contract_partition(g, &parts)?.graph;
        Ok(CircuitAtlas { circuits, components, component_of, quotient, circuits_at })
    }

    /// Whether `e` lies inside some circuit.
    pub fn is_internal(&self, e: &Edge) -> bool {
        self.circuits_at[e.u].iter().any(|c| self.circuits_at[e.v].contains(c))
    }

    /// Edges lying in no circuit.
    pub fn external_edges<'a>(&'a self, g: &'a MultiGraph) -> impl Iterator<Item = &'a Edge> + 'a {
        g.edges().iter().filter(move |e| !self.is_internal(e))
    }

    /// Number of external edges at each vertex.
    pub fn external_degrees(&self, g: &MultiGraph) -> Vec<usize> {
        let mut d = vec![0; g.vertex_count()];
        for e in self.external_edges(g) {
            d[e.u] += 1;
            d[e.v] += 1;
        }
        d
    }

    /// Whether every nontrivial component is a single circuit and no component is trivial.
    pub fn components_are_circuits(&self) -> bool {
        self.components.iter().all(|c| c.circuits.len() == 1)
    }
}

/// Circuits of a 2T-graph, found by a fundamental-circuit sweep over edges.
fn circuits_of_2t(g: &MultiGraph) -> Result<Vec<Vec<Vertex>>> {
    let mut covered: BTreeSet<EdgeId> = BTreeSet::new();
    let mut found: BTreeSet<Vec<Vertex>> = BTreeSet::new();
    let mut record = |edges: &BTreeSet<EdgeId>, covered: &mut BTreeSet<EdgeId>| {
        let mut vs: BTreeSet<Vertex> = BTreeSet::new();
        for &id in edges {
            let e = g.edge(id).expect("circuit edge");
            vs.insert(e.u);
            vs.insert(e.v);
            covered.insert(id);
        }
        found.insert(vs.into_iter().collect());
    };
    for (_, c) in greedy_circuits(g) {
        record(&c, &mut covered);
    }
    for e in g.edges() {
        if covered.contains(&e.id) {
            continue;
        }
        if let Some(c) = fundamental_circuit(g, e.id)? {
            record(&c, &mut covered);
        }
    }
    Ok(found.into_iter().collect())
}

pub fn all_generic_circuits(g: &MultiGraph) -> Result<Vec<Vec<Vertex>>> {
    Ok(CircuitAtlas::build(g)?.circuits)
}

pub fn generic_components(g: &MultiGraph) -> Result<Vec<Component>> {
    Ok(CircuitAtlas::build(g)?.components)
}

/// Quotient graph and the component index of every vertex.
pub fn quotient(g: &MultiGraph) -> Result<(MultiGraph, Vec<usize>)> {
    let a = CircuitAtlas::build(g)?;
    Ok((a.quotient, a.component_of))
}

/// `g`, its quotient, the quotient of that, and so on down to one vertex.
pub fn quotient_chain(g: &MultiGraph) -> Result<Vec<MultiGraph>> {
    let mut chain = vec![g.clone()];
    let mut cur = g.clone();
    while cur.vertex_count() > 1 {
        let (q, _) = quotient(&cur)?;
        if q.vertex_count() >= cur.vertex_count() {
            return Err(Error::InvariantViolation("quotient did not shrink".into()));
        }
        if q.vertex_count() > 1 {
            require_2t(&q).map_err(|_| Error::InvariantViolation("quotient is not 2T".into()))?;
        }
        chain.push(q.clone());
        cur = q;
    }
    Ok(chain)
}

/// The partition of `V` into vertex-disjoint circuits, if one exists. It is
/// unique: a vertex covered by only one remaining circuit forces that circuit.
pub fn disjoint_circuit_partition(g: &MultiGraph) -> Result<Option<Vec<Vec<Vertex>>>> {
    let a = CircuitAtlas::build(g)?;
    Ok(partition_from_atlas(&a, g.vertex_count()))
}

pub(crate) fn partition_from_atlas(a: &CircuitAtlas, n: usize) -> Option<Vec<Vec<Vertex>>> {
    let mut alive = vec![true; a.circuits.len()];
    let mut covered = vec![false; n];
    let mut chosen = Vec::new();
    loop {
        let live_count = |v: Vertex, alive: &[bool]| a.circuits_at[v].iter().filter(|&&c| alive[c]).count();
        let Some(v) = (0..n).filter(|&v| !covered[v]).min_by_key(|&v| live_count(v, &alive)) else {
            break;
        };
        if live_count(v, &alive) == 0 {
            return None;
        }
        // Lowest-index live circuit at the least-covered vertex; in a hyperforest
        // some uncovered vertex always lies in exactly one live circuit.
        let c = *a.circuits_at[v].iter().find(|&&c| alive[c]).expect("live circuit");
        chosen.push(c);
        for &x in &a.circuits[c] {
            covered[x] = true;
            for &d in &a.circuits_at[x] {
                alive[d] = false;
            }
        }
    }
    chosen.sort_unstable();
    Some(chosen.into_iter().map(|c| a.circuits[c].clone()).collect())
}

/// Circuits of a component listed along the path they form, with the vertex
/// shared by each consecutive pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HyperpathOrder {
    pub circuits: Vec<usize>,
    pub shared: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "witness", rename_all = "snake_case")]
pub enum NonLinearWitness {
    /// A vertex lying in three or more circuits.
    SharedVertex { vertex: Vertex, circuits: Vec<usize> },
    /// A circuit meeting three or more other circuits.
    BranchCircuit { circuit: usize, neighbours: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Linearity {
    Hyperpath(HyperpathOrder),
    NotLinear(NonLinearWitness),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentLinearity {
    pub component: usize,
    pub linearity: Linearity,
}

pub fn linearity(g: &MultiGraph) -> Result<Vec<ComponentLinearity>> {
    let a = CircuitAtlas::build(g)?;
    linearity_of(&a)
}

pub(crate) fn linearity_of(a: &CircuitAtlas) -> Result<Vec<ComponentLinearity>> {
    let mut out = Vec::new();
    for (k, comp) in a.components.iter().enumerate() {
        if comp.kind == ComponentKind::Trivial {
            continue;
        }
        out.push(ComponentLinearity { component: k, linearity: component_linearity(a, comp)? });
    }
    Ok(out)
}

fn component_linearity(a: &CircuitAtlas, comp: &Component) -> Result<Linearity> {
    for &v in &comp.vertices {
        if a.circuits_at[v].len() >= 3 {
            return Ok(Linearity::NotLinear(NonLinearWitness::SharedVertex {
                vertex: v,
                circuits: a.circuits_at[v].clone(),
            }));
        }
    }
    // neighbours[c] = (other circuit, shared vertex)
    let meet = |c: usize| -> Vec<(usize, Vertex)> {
        let mut m = Vec::new();
        for &v in &a.circuits[c] {
            for &d in &a.circuits_at[v] {
                if d != c {
                    m.push((d, v));
                }
            }
        }
        m.sort_unstable();
        m
    };
    for &c in &comp.circuits {
        let m = meet(c);
        if m.len() >= 3 {
            return Ok(Linearity::NotLinear(NonLinearWitness::BranchCircuit {
                circuit: c,
                neighbours: m.into_iter().map(|(d, _)| d).collect(),
            }));
        }
    }
    let start = *comp
        .circuits
        .iter()
        .find(|&&c| meet(c).len() <= 1)
        .ok_or_else(|| Error::InvariantViolation("circuits of a component form a cycle".into()))?;
    let mut order = HyperpathOrder { circuits: vec![start], shared: Vec::new() };
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next = meet(cur).into_iter().find(|&(d, _)| d != prev);
        match next {
            Some((d, v)) => {
                order.circuits.push(d);
                order.shared.push(v);
                prev = cur;
                cur = d;
            }
            None => break,
        }
    }
    if order.circuits.len() != comp.circuits.len() {
        return Err(Error::InvariantViolation("circuit path does not cover its component".into()));
    }
    Ok(Linearity::Hyperpath(order))
}

/// Whether every nontrivial component is a hyperpath.
pub fn is_linear(g: &MultiGraph) -> Result<bool> {
    Ok(linearity(g)?.iter().all(|c| matches!(c.linearity, Linearity::Hyperpath(_))))
}
