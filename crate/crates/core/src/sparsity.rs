//! Counting conditions: (2,2)- and (2,3)-sparsity, 2T recognition and
//! generic circuits.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph, Vertex};

/// Incremental (k,l) pebble game with k = 2 and l in {2, 3}.
///
/// Accepted edges are kept oriented; every vertex starts with two pebbles and
/// accepting `uv` spends one pebble of `u`. The edge is accepted when `l + 1`
/// pebbles can be gathered on its endpoints.
#[derive(Debug, Clone)]
pub struct PebbleGame {
    l: u8,
    pebbles: Vec<u8>,
    out: Vec<Vec<(EdgeId, Vertex)>>,
}

impl PebbleGame {
    pub fn new(n: usize, k: u32, l: u32) -> Result<Self> {
        if k != 2 || !(l == 2 || l == 3) {
            return Err(Error::UnsupportedParameters { k, l });
        }
        Ok(PebbleGame { l: l as u8, pebbles: vec![2; n], out: vec![Vec::new(); n] })
    }

    /// Tries to accept edge `id = uv`. On rejection returns the set of vertices
    /// reachable from `u` or `v`, which is the smallest tight set holding both.
    pub fn try_insert(&mut self, id: EdgeId, u: Vertex, v: Vertex) -> std::result::Result<(), Vec<Vertex>> {
        let need = self.l + 1;
        while self.pebbles[u] + self.pebbles[v] < need {
            if !self.fetch(u, v) && !self.fetch(v, u) {
                return Err(self.reach(u, v));
            }
        }
        let (tail, head) = if self.pebbles[u] > 0 { (u, v) } else { (v, u) };
        self.pebbles[tail] -= 1;
        self.out[tail].push((id, head));
        Ok(())
    }

    /// Moves one free pebble to `from` along a reversed directed path that
    /// avoids `keep`. Returns false if no pebble is reachable.
    fn fetch(&mut self, from: Vertex, keep: Vertex) -> bool {
        let n = self.pebbles.len();
        let mut pred: Vec<Option<(Vertex, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[from] = true;
        seen[keep] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            for (slot, &(_, y)) in self.out[x].iter().enumerate() {
                if seen[y] {
                    continue;
                }
                seen[y] = true;
                pred[y] = Some((x, slot));
                if self.pebbles[y] > 0 {
                    self.pebbles[y] -= 1;
                    self.pebbles[from] += 1;
                    let mut cur = y;
                    while let Some((p, slot)) = pred[cur] {
                        let (id, _) = self.out[p].swap_remove(slot);
                        self.out[cur].push((id, p));
                        cur = p;
                    }
                    return true;
                }
                queue.push_back(y);
            }
        }
        false
    }

    fn reach(&self, u: Vertex, v: Vertex) -> Vec<Vertex> {
        let mut seen = vec![false; self.pebbles.len()];
        seen[u] = true;
        seen[v] = true;
        let mut stack = vec![u, v];
        while let Some(x) = stack.pop() {
            for &(_, y) in &self.out[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..seen.len()).filter(|&x| seen[x]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Independence {
    pub independent: bool,
    /// Edges accepted greedily in id order; a base of the sparsity matroid.
    pub basis: Vec<EdgeId>,
    pub rejected: Vec<EdgeId>,
}

/// Runs the (k,l) pebble game over all edges in id order.
pub fn pebble_independent(g: &MultiGraph, k: u32, l: u32) -> Result<Independence> {
    let mut game = PebbleGame::new(g.vertex_count(), k, l)?;
    let mut basis = Vec::new();
    let mut rejected = Vec::new();
    for e in g.edges() {
        match game.try_insert(e.id, e.u, e.v) {
            Ok(()) => basis.push(e.id),
            Err(_) => rejected.push(e.id),
        }
    }
    Ok(Independence { independent: rejected.is_empty(), basis, rejected })
}

/// The unique (2,3)-circuit in `B + e`, where `B` is the greedy base of `E - e`.
/// `None` when `e` lies in no circuit.
pub fn fundamental_circuit(g: &MultiGraph, e: EdgeId) -> Result<Option<BTreeSet<EdgeId>>> {
    let target = *g.edge(e).ok_or(Error::UnknownEdge(e))?;
    let mut game = PebbleGame::new(g.vertex_count(), 2, 3)?;
    let mut basis = Vec::new();
    for f in g.edges() {
        if f.id != e && game.try_insert(f.id, f.u, f.v).is_ok() {
            basis.push(f);
        }
    }
    match game.try_insert(e, target.u, target.v) {
        Ok(()) => Ok(None),
        Err(reach) => Ok(Some(circuit_in(&basis, &reach, e, g.vertex_count()))),
    }
}

fn circuit_in(basis: &[&crate::graph::Edge], reach: &[Vertex], e: EdgeId, n: usize) -> BTreeSet<EdgeId> {
    let mut inside = vec![false; n];
    for &x in reach {
        inside[x] = true;
    }
    let mut c: BTreeSet<EdgeId> =
        basis.iter().filter(|f| inside[f.u] && inside[f.v]).map(|f| f.id).collect();
    c.insert(e);
    c
}

/// Each rejected edge of the greedy (2,3) game with its fundamental circuit
/// with respect to the greedy base. Every circuit of a 2T-graph appears here.
pub(crate) fn greedy_circuits(g: &MultiGraph) -> Vec<(EdgeId, BTreeSet<EdgeId>)> {
    let mut game = PebbleGame::new(g.vertex_count(), 2, 3).expect("(2,3) is supported");
    let mut basis = Vec::new();
    let mut out = Vec::new();
    for f in g.edges() {
        match game.try_insert(f.id, f.u, f.v) {
            Ok(()) => basis.push(f),
            Err(reach) => out.push((f.id, circuit_in(&basis, &reach, f.id, g.vertex_count()))),
        }
    }
    out
}

/// True iff `|E| = 2|V| - 2 > 0` and every proper subset `X` with
/// `2 <= |X| < |V|` spans at most `2|X| - 3` edges.
pub fn is_generic_circuit(g: &MultiGraph) -> bool {
    let n = g.vertex_count();
    if n < 2 || g.edge_count() != 2 * n - 2 {
        return false;
    }
    let circuits = greedy_circuits(g);
    circuits.len() == 1 && circuits[0].1.len() == g.edge_count()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoTreeCertificate {
    pub tree1: BTreeSet<EdgeId>,
    pub tree2: BTreeSet<EdgeId>,
}

impl TwoTreeCertificate {
    /// Independent check: the trees are disjoint spanning trees of `g` using only its edges.
    pub fn check(&self, g: &MultiGraph) -> bool {
        self.tree1.is_disjoint(&self.tree2)
            && is_spanning_tree(g, &self.tree1)
            && is_spanning_tree(g, &self.tree2)
    }
}

pub(crate) fn is_spanning_tree(g: &MultiGraph, ids: &BTreeSet<EdgeId>) -> bool {
    let n = g.vertex_count();
    if ids.len() + 1 != n {
        return false;
    }
    let mut uf = UnionFind::new(n);
    ids.iter().all(|&id| g.edge(id).is_some_and(|e| uf.union(e.u, e.v)))
}

/// A vertex partition with fewer than `2(|parts| - 1)` crossing edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TuttePartition {
    pub parts: Vec<Vec<Vertex>>,
    pub cross_edge_count: usize,
}

impl TuttePartition {
    pub fn new(g: &MultiGraph, parts: Vec<Vec<Vertex>>) -> Self {
        let cross_edge_count = count_cross(g, &parts).unwrap_or(usize::MAX);
        TuttePartition { parts, cross_edge_count }
    }

    /// Recounts crossing edges and checks the violated packing bound.
    pub fn check(&self, g: &MultiGraph) -> bool {
        match count_cross(g, &self.parts) {
            Some(c) => c == self.cross_edge_count && c + 2 < 2 * self.parts.len(),
            None => false,
        }
    }
}

fn count_cross(g: &MultiGraph, parts: &[Vec<Vertex>]) -> Option<usize> {
    let mut part = vec![usize::MAX; g.vertex_count()];
    for (i, p) in parts.iter().enumerate() {
        if p.is_empty() {
            return None;
        }
        for &v in p {
            if v >= part.len() || part[v] != usize::MAX {
                return None;
            }
            part[v] = i;
        }
    }
    if part.contains(&usize::MAX) {
        return None;
    }
    Some(g.edges().iter().filter(|e| part[e.u] != part[e.v]).count())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum TwoTreeVerdict {
    Certificate(TwoTreeCertificate),
    Partition(TuttePartition),
    CountMismatch { edges: usize, expected: usize },
}

impl TwoTreeVerdict {
    pub fn is_2t(&self) -> bool {
        matches!(self, TwoTreeVerdict::Certificate(_))
    }

    pub fn certificate(&self) -> Option<&TwoTreeCertificate> {
        match self {
            TwoTreeVerdict::Certificate(c) => Some(c),
            _ => None,
        }
    }
}

/// Decides whether `g` is the union of two edge-disjoint spanning trees.
pub fn is_2t(g: &MultiGraph) -> Result<TwoTreeVerdict> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::TrivialGraph(n));
    }
    if g.edge_count() != 2 * n - 2 {
        return Ok(TwoTreeVerdict::CountMismatch { edges: g.edge_count(), expected: 2 * n - 2 });
    }
    let mut packer = ForestPair::new(g);
    for e in g.edges() {
        if let Err(reached) = packer.insert(e.id) {
            return Ok(TwoTreeVerdict::Partition(tutte_from_reached(g, &reached)));
        }
    }
    let [tree1, tree2] = packer.forests;
    Ok(TwoTreeVerdict::Certificate(TwoTreeCertificate { tree1, tree2 }))
}

/// Shorthand for `is_2t(g)` returning a plain boolean; false for trivial graphs.
pub fn is_two_tree(g: &MultiGraph) -> bool {
    is_2t(g).is_ok_and(|v| v.is_2t())
}

/// Reached edges span themselves in both forests, so the component of
/// `(V, reached)` holding the new edge carries `2|C| - 1` edges.
fn tutte_from_reached(g: &MultiGraph, reached: &BTreeSet<EdgeId>) -> TuttePartition {
    let n = g.vertex_count();
    let mut uf = UnionFind::new(n);
    for &id in reached {
        let e = g.edge(id).expect("reached edges belong to g");
        uf.union(e.u, e.v);
    }
    let mut edges_in = vec![0usize; n];
    let mut size = vec![0usize; n];
    for v in 0..n {
        size[uf.find(v)] += 1;
    }
    for e in g.edges() {
        let r = uf.find(e.u);
        if r == uf.find(e.v) {
            edges_in[r] += 1;
        }
    }
    let root = (0..n)
        .find(|&r| size[r] >= 2 && edges_in[r] + 1 >= 2 * size[r])
        .expect("augmentation failure leaves an overfull component");
    let mut parts = vec![(0..n).filter(|&v| uf.find(v) == root).collect::<Vec<_>>()];
    parts.extend((0..n).filter(|&v| uf.find(v) != root).map(|v| vec![v]));
    TuttePartition::new(g, parts)
}

/// Two forests grown by matroid-union augmentation.
struct ForestPair<'a> {
    g: &'a MultiGraph,
    forests: [BTreeSet<EdgeId>; 2],
}

impl<'a> ForestPair<'a> {
    fn new(g: &'a MultiGraph) -> Self {
        ForestPair { g, forests: [BTreeSet::new(), BTreeSet::new()] }
    }

    /// Path of forest edges between the endpoints of `id` in forest `i`, or
    /// `None` if they lie in different trees.
    fn forest_path(&self, i: usize, id: EdgeId) -> Option<Vec<EdgeId>> {
        let e = self.g.edge(id).expect("edge of g");
        let n = self.g.vertex_count();
        let mut adj = vec![Vec::new(); n];
        for &f in &self.forests[i] {
            let f = self.g.edge(f).expect("edge of g");
            adj[f.u].push((f.id, f.v));
            adj[f.v].push((f.id, f.u));
        }
        let mut pred: Vec<Option<(Vertex, EdgeId)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[e.u] = true;
        let mut queue = VecDeque::from([e.u]);
        while let Some(x) = queue.pop_front() {
            if x == e.v {
                let mut path = Vec::new();
                let mut cur = x;
                while let Some((p, f)) = pred[cur] {
                    path.push(f);
                    cur = p;
                }
                return Some(path);
            }
            for &(f, y) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    pred[y] = Some((x, f));
                    queue.push_back(y);
                }
            }
        }
        None
    }

    fn owner(&self, id: EdgeId) -> Option<usize> {
        (0..2).find(|&i| self.forests[i].contains(&id))
    }

    /// Inserts `id` into one of the forests, re-shuffling along a shortest
    /// exchange path. On failure returns every edge the search reached.
    fn insert(&mut self, id: EdgeId) -> std::result::Result<(), BTreeSet<EdgeId>> {
        // label[f] = (edge that replaces f, forest f leaves)
        let mut label: std::collections::BTreeMap<EdgeId, (EdgeId, usize)> = Default::default();
        let mut reached = BTreeSet::from([id]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            let targets: Vec<usize> = match self.owner(x) {
                Some(j) => vec![1 - j],
                None => vec![0, 1],
            };
            for i in targets {
                match self.forest_path(i, x) {
                    None => {
                        self.forests[i].insert(x);
                        let mut cur = x;
                        while let Some(&(by, j)) = label.get(&cur) {
                            self.forests[j].remove(&cur);
                            self.forests[j].insert(by);
                            cur = by;
                        }
                        return Ok(());
                    }
                    Some(path) => {
                        for f in path {
                            if reached.insert(f) {
                                label.insert(f, (x, i));
                                queue.push_back(f);
                            }
                        }
                    }
                }
            }
        }
        Err(reached)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    /// Returns false if `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}
