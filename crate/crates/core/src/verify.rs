//! Checking orderings and branching pairs, plus exhaustive oracles for small inputs.
//!
//! In an acyclic digraph with unique source `s`, choosing one entering arc at
//! every other vertex always yields an out-branching, and dually for the
//! unique sink `t`. An ordering is therefore good exactly when every `v != s`
//! can be given an entering arc from some `u` while each `u != t` keeps at
//! least one leaving arc unchosen. That is a bipartite matching problem in
//! which `u` can serve at most `d+(u) - 1` vertices; a Hall witness of a
//! maximum matching is a set violating the counting inequality below.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{orient_by_ordering, BranchKind, BranchingPair, Digraph, MultiGraph, Vertex, VertexOrdering};

/// A set `X` of non-source vertices with `sum over X- of (d+(x) - 1) < |X|`,
/// where `X-` is the set of vertices with an out-neighbour in `X`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ViolatorSet {
    pub x: Vec<Vertex>,
    pub x_minus: Vec<Vertex>,
    pub lhs: usize,
    pub rhs: usize,
}

impl ViolatorSet {
    /// Computes `X-`, the left-hand side and `|X|` for `x` in `d`.
    pub fn evaluate(d: &Digraph, x: Vec<Vertex>) -> ViolatorSet {
        let mut member = vec![false; d.vertex_count()];
        for &v in &x {
            member[v] = true;
        }
        let x_minus: BTreeSet<Vertex> =
            d.arcs().iter().filter(|a| member[a.head]).map(|a| a.tail).collect();
        let outdeg = d.out_degrees();
        let lhs = x_minus.iter().map(|&u| outdeg[u] - 1).sum();
        let rhs = x.len();
        ViolatorSet { x, x_minus: x_minus.into_iter().collect(), lhs, rhs }
    }

    /// Recomputes the inequality from scratch.
    pub fn check(&self, d: &Digraph, s: Vertex) -> bool {
        if self.x.contains(&s) || self.x.is_empty() {
            return false;
        }
        let again = ViolatorSet::evaluate(d, self.x.clone());
        again == *self && again.lhs < again.rhs
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Structural {
    /// More than one vertex has in-degree zero.
    MultipleSources { sources: Vec<Vertex> },
    /// More than one vertex has out-degree zero.
    MultipleSinks { sinks: Vec<Vertex> },
    /// Fewer than two vertices.
    TooSmall,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BadOrdering {
    Structural(Structural),
    Violator(ViolatorSet),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum OrderingVerdict {
    Good(BranchingPair),
    Bad(BadOrdering),
}

impl OrderingVerdict {
    pub fn is_good(&self) -> bool {
        matches!(self, OrderingVerdict::Good(_))
    }

    pub fn pair(&self) -> Option<&BranchingPair> {
        match self {
            OrderingVerdict::Good(p) => Some(p),
            OrderingVerdict::Bad(_) => None,
        }
    }
}

/// Decides whether `ord` is a good ordering of `g`.
pub fn check_ordering(g: &MultiGraph, ord: &VertexOrdering) -> Result<OrderingVerdict> {
    let d = orient_by_ordering(g, ord)?;
    check_digraph(&d)
}

/// Same as [`check_ordering`] for an acyclic digraph with arc ids equal to edge ids.
pub fn check_digraph(d: &Digraph) -> Result<OrderingVerdict> {
    let n = d.vertex_count();
    if n < 2 {
        return Ok(OrderingVerdict::Bad(BadOrdering::Structural(Structural::TooSmall)));
    }
    let indeg = d.in_degrees();
    let outdeg = d.out_degrees();
    let sources: Vec<Vertex> = (0..n).filter(|&v| indeg[v] == 0).collect();
    if sources.len() != 1 {
        return Ok(OrderingVerdict::Bad(BadOrdering::Structural(Structural::MultipleSources { sources })));
    }
    let sinks: Vec<Vertex> = (0..n).filter(|&v| outdeg[v] == 0).collect();
    if sinks.len() != 1 {
        return Ok(OrderingVerdict::Bad(BadOrdering::Structural(Structural::MultipleSinks { sinks })));
    }
    let (s, t) = (sources[0], sinks[0]);

    // preds[v]: distinct in-neighbours of v.
    let mut preds: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    for a in d.arcs() {
        preds[a.head].push(a.tail);
    }
    for p in &mut preds {
        p.sort_unstable();
        p.dedup();
    }
    let cap: Vec<usize> = (0..n).map(|u| outdeg[u].saturating_sub(1)).collect();
    let mut m = CapMatching::new(n, preds, cap);
    let left: Vec<Vertex> = (0..n).filter(|&v| v != s).collect();
    m.run(&left);

    if let Some(&free) = left.iter().find(|&&v| m.assign[v].is_none()) {
        let x = m.hall_witness(free);
        let viol = ViolatorSet::evaluate(d, x);
        if viol.lhs >= viol.rhs {
            return Err(Error::InvariantViolation(format!(
                "Hall witness {:?} does not violate the counting bound",
                viol.x
            )));
        }
        return Ok(OrderingVerdict::Bad(BadOrdering::Violator(viol)));
    }

    let out_arcs = d.out_arcs();
    let mut used = vec![false; d.arcs().len()];
    let index_of = |id: usize| d.arcs().binary_search_by_key(&id, |a| a.id).expect("arc id");
    let mut out = BTreeSet::new();
    for &v in &left {
        let u = m.assign[v].expect("saturated");
        let k = out_arcs[u]
            .iter()
            .map(|&id| index_of(id))
            .find(|&k| !used[k] && d.arcs()[k].head == v)
            .expect("arc u->v exists");
        used[k] = true;
        out.insert(d.arcs()[k].edge.unwrap_or(d.arcs()[k].id));
    }
    let mut inn = BTreeSet::new();
    for u in (0..n).filter(|&u| u != t) {
        let k = out_arcs[u]
            .iter()
            .map(|&id| index_of(id))
            .find(|&k| !used[k])
            .ok_or_else(|| Error::InvariantViolation(format!("vertex {u} has no spare leaving arc")))?;
        used[k] = true;
        inn.insert(d.arcs()[k].edge.unwrap_or(d.arcs()[k].id));
    }
    Ok(OrderingVerdict::Good(BranchingPair::new(s, t, out, inn)))
}

/// Capacitated bipartite matching: left vertex `v` may be assigned to any
/// `u` in `preds[v]`; right vertex `u` takes at most `cap[u]` left vertices.
/// Phases of shortest augmenting paths, as in Hopcroft–Karp.
struct CapMatching {
    preds: Vec<Vec<Vertex>>,
    cap: Vec<usize>,
    assign: Vec<Option<Vertex>>,
    holders: Vec<Vec<Vertex>>,
    dist: Vec<usize>,
}

const INF: usize = usize::MAX;

impl CapMatching {
    fn new(n: usize, preds: Vec<Vec<Vertex>>, cap: Vec<usize>) -> Self {
        CapMatching { preds, cap, assign: vec![None; n], holders: vec![Vec::new(); n], dist: vec![INF; n] }
    }

    fn run(&mut self, left: &[Vertex]) {
        loop {
            let limit = self.layer(left);
            if limit == INF {
                break;
            }
            let mut progressed = false;
            for &v in left {
                if self.assign[v].is_none() && self.augment(v, limit) {
                    progressed = true;
                }
            }
            if !progressed {
                break;
            }
        }
    }

    /// BFS layering from the free left vertices. Returns the length of the
    /// shortest augmenting path, or INF.
    fn layer(&mut self, left: &[Vertex]) -> usize {
        self.dist.iter_mut().for_each(|d| *d = INF);
        let mut queue = VecDeque::new();
        for &v in left {
            if self.assign[v].is_none() {
                self.dist[v] = 0;
                queue.push_back(v);
            }
        }
        let mut limit = INF;
        while let Some(v) = queue.pop_front() {
            if self.dist[v] >= limit {
                continue;
            }
            for &u in &self.preds[v] {
                if self.holders[u].len() < self.cap[u] {
                    limit = limit.min(self.dist[v] + 1);
                } else {
                    for &w in &self.holders[u] {
                        if self.dist[w] == INF {
                            self.dist[w] = self.dist[v] + 1;
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
        limit
    }

    fn augment(&mut self, v: Vertex, limit: usize) -> bool {
        let dv = self.dist[v];
        for i in 0..self.preds[v].len() {
            let u = self.preds[v][i];
            if self.holders[u].len() < self.cap[u] {
                if dv + 1 == limit {
                    self.take(v, u);
                    return true;
                }
                continue;
            }
            let holders = self.holders[u].clone();
            for w in holders {
                if self.dist[w] == dv + 1 && self.augment(w, limit) {
                    self.take(v, u);
                    return true;
                }
            }
        }
        self.dist[v] = INF;
        false
    }

    fn take(&mut self, v: Vertex, u: Vertex) {
        if let Some(old) = self.assign[v].take() {
            self.holders[old].retain(|&w| w != v);
        }
        self.assign[v] = Some(u);
        self.holders[u].push(v);
    }

    /// Left vertices reachable from the free vertex `free` by alternating paths.
    fn hall_witness(&self, free: Vertex) -> Vec<Vertex> {
        let n = self.assign.len();
        let mut seen_left = vec![false; n];
        let mut seen_right = vec![false; n];
        seen_left[free] = true;
        let mut queue = VecDeque::from([free]);
        while let Some(v) = queue.pop_front() {
            for &u in &self.preds[v] {
                if !seen_right[u] {
                    seen_right[u] = true;
                    for &w in &self.holders[u] {
                        if !seen_left[w] {
                            seen_left[w] = true;
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
        (0..n).filter(|&v| seen_left[v]).collect()
    }
}

/// Checks a claimed certificate; `Err` carries the first failed condition.
pub fn verify_pair(g: &MultiGraph, ord: &VertexOrdering, pair: &BranchingPair) -> std::result::Result<(), String> {
    let n = g.vertex_count();
    let d = orient_by_ordering(g, ord).map_err(|e| e.to_string())?;
    if n < 2 {
        return Err("fewer than two vertices".into());
    }
    let (s, t) = (pair.s(), pair.t());
    if s == t {
        return Err("roots coincide".into());
    }
    if pair.out.kind != BranchKind::Out || pair.inn.kind != BranchKind::In {
        return Err("branching kinds are swapped".into());
    }
    if ord.first() != Some(s) {
        return Err(format!("out-branching root {s} is not the first vertex"));
    }
    if ord.last() != Some(t) {
        return Err(format!("in-branching root {t} is not the last vertex"));
    }
    if let Some(id) = pair.out.arcs.intersection(&pair.inn.arcs).next() {
        return Err(format!("edge {id} is used by both branchings"));
    }
    let arc = |id: usize| d.arc(id).ok_or_else(|| format!("edge {id} is not in the graph"));
    let mut enter = vec![0usize; n];
    for &id in &pair.out.arcs {
        enter[arc(id)?.head] += 1;
    }
    for v in 0..n {
        let want = usize::from(v != s);
        if enter[v] != want {
            return Err(format!("vertex {v} has {} entering out-branching arcs, expected {want}", enter[v]));
        }
    }
    let mut leave = vec![0usize; n];
    for &id in &pair.inn.arcs {
        leave[arc(id)?.tail] += 1;
    }
    for v in 0..n {
        let want = usize::from(v != t);
        if leave[v] != want {
            return Err(format!("vertex {v} has {} leaving in-branching arcs, expected {want}", leave[v]));
        }
    }
    Ok(())
}

pub const DEFAULT_GOOD_BOUND: usize = 9;

/// Exhaustive search for a good ordering, up to reversal. Returns the
/// lexicographically first one with `first < last`.
pub fn brute_force_good_ordering(g: &MultiGraph, bound: usize) -> Result<Option<(VertexOrdering, BranchingPair)>> {
    let n = g.vertex_count();
    if n > bound {
        return Err(Error::BoundExceeded { size: n, bound });
    }
    if n < 2 {
        return Ok(None);
    }
    let nbrs: Vec<Vec<Vertex>> = (0..n).map(|v| g.neighbours(v)).collect();
    let mut search = GoodSearch { g, nbrs: &nbrs, order: Vec::with_capacity(n), placed: vec![false; n], later: vec![0; n], found: None };
    search.extend()?;
    Ok(search.found)
}

struct GoodSearch<'a> {
    g: &'a MultiGraph,
    nbrs: &'a [Vec<Vertex>],
    order: Vec<Vertex>,
    placed: Vec<bool>,
    /// Placed neighbours that come later, per vertex.
    later: Vec<usize>,
    found: Option<(VertexOrdering, BranchingPair)>,
}

impl GoodSearch<'_> {
    fn extend(&mut self) -> Result<bool> {
        let n = self.placed.len();
        if self.order.len() == n {
            if self.order[0] > self.order[n - 1] {
                return Ok(false);
            }
            let ord = VertexOrdering::new(self.order.clone(), n)?;
            if let OrderingVerdict::Good(pair) = check_ordering(self.g, &ord)? {
                self.found = Some((ord, pair));
                return Ok(true);
            }
            return Ok(false);
        }
        for v in 0..n {
            if self.placed[v] {
                continue;
            }
            // Every vertex after the first needs an earlier neighbour.
            if !self.order.is_empty() && !self.nbrs[v].iter().any(|&w| self.placed[w]) {
                continue;
            }
            self.placed[v] = true;
            self.order.push(v);
            for &y in &self.nbrs[v] {
                if self.placed[y] && y != v {
                    self.later[y] += 1;
                }
            }
            // Only the last vertex may lack a later neighbour.
            let complete = self.order.len() == n;
            let sink_early = !complete
                && self.order.iter().any(|&w| {
                    self.later[w] == 0 && self.nbrs[w].iter().all(|&y| self.placed[y])
                });
            if !sink_early && self.extend()? {
                return Ok(true);
            }
            for &y in &self.nbrs[v] {
                if self.placed[y] && y != v {
                    self.later[y] -= 1;
                }
            }
            self.order.pop();
            self.placed[v] = false;
        }
        Ok(false)
    }
}

/// Every vertex but the last has a later out-neighbour and every vertex but
/// the first has an earlier in-neighbour; first is `s`, last is `t`.
pub fn is_st_ordering(d: &Digraph, ord: &VertexOrdering, s: Vertex, t: Vertex) -> bool {
    let n = d.vertex_count();
    if ord.len() != n || n < 2 || s == t || ord.first() != Some(s) || ord.last() != Some(t) {
        return false;
    }
    let pos = ord.positions();
    let mut later_out = vec![false; n];
    let mut earlier_in = vec![false; n];
    for a in d.arcs() {
        if pos[a.tail] < pos[a.head] {
            later_out[a.tail] = true;
            earlier_in[a.head] = true;
        }
    }
    (0..n).all(|v| (v == t || later_out[v]) && (v == s || earlier_in[v]))
}

pub const DEFAULT_ST_BOUND: usize = 22;

/// Exhaustive (s,t)-ordering search by dynamic programming over placed prefixes.
pub fn brute_force_st_ordering(d: &Digraph, s: Vertex, t: Vertex, bound: usize) -> Result<Option<VertexOrdering>> {
    let n = d.vertex_count();
    if n > bound.min(26) {
        return Err(Error::BoundExceeded { size: n, bound: bound.min(26) });
    }
    if s >= n || t >= n {
        return Err(Error::VertexOutOfRange { vertex: s.max(t), n });
    }
    if s == t {
        return Ok(None);
    }
    let mut inm = vec![0u32; n];
    let mut outm = vec![0u32; n];
    for a in d.arcs() {
        outm[a.tail] |= 1 << a.head;
        inm[a.head] |= 1 << a.tail;
    }
    let full: u32 = (1u32 << n) - 1;
    if outm[s] & !(1 << s) == 0 {
        return Ok(None);
    }
    // parent[mask] = last vertex added, or NONE if mask unreachable.
    const NONE: u8 = u8::MAX;
    let mut parent = vec![NONE; 1usize << n];
    let start = 1u32 << s;
    parent[start as usize] = s as u8;
    let t_bit = 1u32 << t;
    for mask in 0..=full {
        if parent[mask as usize] == NONE || mask & t_bit != 0 {
            continue;
        }
        for v in 0..n {
            let bit = 1u32 << v;
            if mask & bit != 0 {
                continue;
            }
            let next = mask | bit;
            if parent[next as usize] != NONE || inm[v] & mask == 0 {
                continue;
            }
            let ok = if v == t { next == full } else { outm[v] & !next & full != 0 };
            if ok {
                parent[next as usize] = v as u8;
            }
        }
    }
    if parent[full as usize] == NONE {
        return Ok(None);
    }
    let mut order = Vec::with_capacity(n);
    let mut mask = full;
    while mask != start {
        let v = parent[mask as usize] as usize;
        order.push(v);
        mask &= !(1u32 << v);
    }
    order.push(s);
    order.reverse();
    Ok(Some(VertexOrdering::new(order, n)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, e: &[(usize, usize)]) -> MultiGraph {
        MultiGraph::from_edges(n, e).unwrap()
    }

    fn k4() -> MultiGraph {
        g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    }

    #[test]
    fn digon_is_good() {
        let d = g(2, &[(0, 1), (0, 1)]);
        let ord = VertexOrdering::identity(2);
        let pair = check_ordering(&d, &ord).unwrap().pair().cloned().unwrap();
        assert_eq!(pair.out.arcs.len() + pair.inn.arcs.len(), 2);
        assert!(verify_pair(&d, &ord, &pair).is_ok());
    }

    #[test]
    fn k4_identity_is_good() {
        let ord = VertexOrdering::identity(4);
        let v = check_ordering(&k4(), &ord).unwrap();
        assert!(verify_pair(&k4(), &ord, v.pair().unwrap()).is_ok());
        let known = BranchingPair::new(0, 3, [0, 3, 2].into(), [1, 4, 5].into());
        assert!(verify_pair(&k4(), &ord, &known).is_ok());
    }

    #[test]
    fn c4_violator() {
        let c4 = g(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let ord = VertexOrdering::identity(4);
        let d = orient_by_ordering(&c4, &ord).unwrap();
        match check_ordering(&c4, &ord).unwrap() {
            OrderingVerdict::Bad(BadOrdering::Violator(v)) => {
                assert!(v.check(&d, 0));
                assert!(v.lhs < v.rhs);
            }
            other => panic!("unexpected {other:?}"),
        }
        let x = ViolatorSet::evaluate(&d, vec![1, 2, 3]);
        assert_eq!((x.lhs, x.rhs), (1, 3));
    }

    #[test]
    fn two_sources_is_structural() {
        let c4 = g(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let ord = VertexOrdering::new(vec![0, 2, 1, 3], 4).unwrap();
        assert!(matches!(
            check_ordering(&c4, &ord).unwrap(),
            OrderingVerdict::Bad(BadOrdering::Structural(Structural::MultipleSources { .. }))
        ));
    }

    #[test]
    fn verify_pair_rejects_defects() {
        let ord = VertexOrdering::identity(4);
        let shared = BranchingPair::new(0, 3, [0, 3, 2].into(), [2, 4, 5].into());
        assert!(verify_pair(&k4(), &ord, &shared).unwrap_err().contains("both"));
        let short = BranchingPair::new(0, 3, [0, 3, 2].into(), [1, 4].into());
        assert!(verify_pair(&k4(), &ord, &short).is_err());
    }

    #[test]
    fn brute_force_small_cases() {
        assert!(brute_force_good_ordering(&k4(), 9).unwrap().is_some());
        let c4 = g(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert!(brute_force_good_ordering(&c4, 9).unwrap().is_none());
        assert!(matches!(
            brute_force_good_ordering(&MultiGraph::new(10), 9),
            Err(Error::BoundExceeded { size: 10, bound: 9 })
        ));
    }

    #[test]
    fn st_orderings_on_a_path() {
        let d = Digraph::from_arcs(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(is_st_ordering(&d, &VertexOrdering::identity(3), 0, 2));
        assert!(!is_st_ordering(&d, &VertexOrdering::new(vec![0, 2, 1], 3).unwrap(), 0, 2));
        assert_eq!(brute_force_st_ordering(&d, 0, 2, 22).unwrap().unwrap().as_slice(), &[0, 1, 2]);
        let single = Digraph::from_arcs(2, &[(0, 1)]).unwrap();
        assert_eq!(brute_force_st_ordering(&single, 0, 1, 22).unwrap().unwrap().as_slice(), &[0, 1]);
    }
}
