//! Negative certificates: pendant sets, conflicts and obstacles, and the
//! aggregate [`refute`] that reports why a graph has no good ordering.
//!
//! Every certificate carries enough data to be re-checked from the graph
//! alone via [`Refutation::recheck`]. A missing refutation proves nothing.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::atlas::{linearity_of, CircuitAtlas, Linearity, NonLinearWitness};
use crate::error::{Error, Result};
use crate::graph::{induced_subgraph, EdgeId, MultiGraph, Vertex};
use crate::sparsity::{is_2t, is_generic_circuit, is_two_tree, TwoTreeVerdict};
use crate::verify::brute_force_good_ordering;

/// `X` with `2 <= |X| <= |V| - 2` such that every edge leaving `X` meets `attach`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PendantSet {
    pub x: Vec<Vertex>,
    pub attach: Vertex,
}

impl PendantSet {
    pub fn check(&self, g: &MultiGraph) -> bool {
        let n = g.vertex_count();
        if self.x.len() < 2 || self.x.len() + 2 > n || self.attach >= n {
            return false;
        }
        let mut inside = vec![false; n];
        for &v in &self.x {
            if v >= n || inside[v] {
                return false;
            }
            inside[v] = true;
        }
        g.edges().iter().all(|e| inside[e.u] == inside[e.v] || e.touches(self.attach))
    }

    /// The complementary pendant set at the same vertex.
    pub fn complement(&self, n: usize) -> PendantSet {
        let x = (0..n).filter(|v| self.x.binary_search(v).is_err()).collect();
        PendantSet { x, attach: self.attach }
    }
}

/// All inclusion-minimal pendant sets.
///
/// A set pendant at `x` either avoids `x` and is a union of components of
/// `G - x`, or contains `x` and its complement is such a union. The minimal
/// ones are single components with at least two vertices, pairs of
/// single-vertex components, and `{x, y}` for a single-vertex component `y`.
pub fn minimal_pendant_sets(g: &MultiGraph) -> Vec<PendantSet> {
    let n = g.vertex_count();
    let mut found: BTreeMap<Vec<Vertex>, Vertex> = BTreeMap::new();
    for x in 0..n {
        let (count, comp) = g.components_without(&[x]);
        let mut members = vec![Vec::new(); count];
        for v in 0..n {
            if v != x {
                members[comp[v]].push(v);
            }
        }
        let singles: Vec<Vertex> = members.iter().filter(|m| m.len() == 1).map(|m| m[0]).collect();
        let mut add = |mut set: Vec<Vertex>| {
            if set.len() >= 2 && set.len() + 2 <= n {
                set.sort_unstable();
                found.entry(set).or_insert(x);
            }
        };
        for m in &members {
            if m.len() >= 2 {
                add(m.clone());
            }
        }
        for (i, &a) in singles.iter().enumerate() {
            add(vec![x, a]);
            for &b in &singles[i + 1..] {
                add(vec![a, b]);
            }
        }
    }
    let mut sets: Vec<PendantSet> = found.into_iter().map(|(x, attach)| PendantSet { x, attach }).collect();
    sets.sort_by(|a, b| a.x.len().cmp(&b.x.len()).then_with(|| a.x.cmp(&b.x)));
    sets
}

/// A largest family of pairwise disjoint pendant sets.
pub fn pendant_sets(g: &MultiGraph) -> Vec<PendantSet> {
    let all = minimal_pendant_sets(g);
    let sets: Vec<Vec<usize>> = all.iter().map(|p| p.x.clone()).collect();
    max_disjoint(&sets).into_iter().map(|i| all[i].clone()).collect()
}

const EXACT_LIMIT: usize = 64;

/// Indices of a maximum family of pairwise disjoint sets. Exact by branch and
/// bound for up to 64 sets, greedy smallest-first beyond that.
pub(crate) fn max_disjoint(sets: &[Vec<usize>]) -> Vec<usize> {
    let k = sets.len();
    if k > EXACT_LIMIT {
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&i| sets[i].len());
        let mut used: BTreeSet<usize> = BTreeSet::new();
        let mut pick = Vec::new();
        for i in order {
            if sets[i].iter().all(|v| !used.contains(v)) {
                used.extend(sets[i].iter().copied());
                pick.push(i);
            }
        }
        pick.sort_unstable();
        return pick;
    }
    let clash: Vec<u64> = (0..k)
        .map(|i| {
            (0..k)
                .filter(|&j| j == i || sets[i].iter().any(|v| sets[j].contains(v)))
                .fold(0u64, |m, j| m | (1 << j))
        })
        .collect();
    let mut best = 0u64;
    let all = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    mis(&clash, all, 0, &mut best);
    (0..k).filter(|&i| best >> i & 1 == 1).collect()
}

fn mis(clash: &[u64], cand: u64, chosen: u64, best: &mut u64) {
    if chosen.count_ones() + cand.count_ones() <= best.count_ones() {
        return;
    }
    if cand == 0 {
        *best = chosen;
        return;
    }
    let i = cand.trailing_zeros() as usize;
    mis(clash, cand & !clash[i], chosen | (1 << i), best);
    mis(clash, cand & !(1 << i), chosen, best);
}

/// Nontrivial components flagged pendant: either the component's vertex set
/// is a pendant set, or it is a hyperpath with an end circuit whose vertices
/// carry no external edge.
pub fn pendant_components(g: &MultiGraph, atlas: &CircuitAtlas) -> Result<Vec<usize>> {
    let n = g.vertex_count();
    let ext = atlas.external_degrees(g);
    let mut out = Vec::new();
    for lin in linearity_of(atlas)? {
        let Linearity::Hyperpath(path) = &lin.linearity else { continue };
        let comp = &atlas.components[lin.component];
        let quiet = |c: usize| atlas.circuits[c].iter().all(|&v| ext[v] == 0);
        let ends = [path.circuits[0], *path.circuits.last().expect("nonempty")];
        let is_pendant_set = comp.vertices.len() >= 2
            && comp.vertices.len() + 2 <= n
            && boundary_attachment(g, &comp.vertices).is_some();
        if is_pendant_set || ends.iter().any(|&c| quiet(c)) {
            out.push(lin.component);
        }
    }
    Ok(out)
}

/// A vertex met by every edge leaving `set`, if any. With no leaving edge
/// the smallest vertex of `set` is returned.
fn boundary_attachment(g: &MultiGraph, set: &[Vertex]) -> Option<Vertex> {
    let mut inside = vec![false; g.vertex_count()];
    for &v in set {
        inside[v] = true;
    }
    let leaving: Vec<_> = g.edges().iter().filter(|e| inside[e.u] != inside[e.v]).collect();
    let Some(first) = leaving.first() else { return set.first().copied() };
    [first.u, first.v].into_iter().find(|&a| leaving.iter().all(|e| e.touches(a)))
}

/// A chain of vertex-disjoint circuits forcing a global root into its union.
///
/// `circuits[0]` has a vertex `x0` with two external edges and one more
/// external edge `links[0] = (y0, z1)` into `circuits[1]`; each middle
/// circuit receives `links[j-1]` and sends `links[j]` from a different
/// vertex, with one further external edge elsewhere; the last circuit has a
/// vertex `xp` with two external edges. Every circuit has external degree 3,
/// every link vertex has external degree 1, and consecutive circuits are
/// joined by exactly one edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conflict {
    pub circuits: Vec<Vec<Vertex>>,
    pub x0: Vertex,
    pub xp: Vertex,
    pub links: Vec<[Vertex; 2]>,
}

impl Conflict {
    /// Re-checks every defining condition from the graph.
    pub fn check(&self, g: &MultiGraph) -> bool {
        let n = g.vertex_count();
        let p = self.circuits.len().wrapping_sub(1);
        if self.circuits.len() < 2 || self.links.len() != p {
            return false;
        }
        let mut owner = vec![usize::MAX; n];
        for (i, c) in self.circuits.iter().enumerate() {
            if c.iter().any(|&v| v >= n || owner[v] != usize::MAX) {
                return false;
            }
            c.iter().for_each(|&v| owner[v] = i);
            let Ok(h) = induced_subgraph(g, c) else { return false };
            if !is_generic_circuit(&h) {
                return false;
            }
        }
        // In a 2T-graph an edge leaving an induced circuit is external when
        // the circuit is a whole generic component; confirm that via the atlas.
        let Ok(atlas) = CircuitAtlas::build(g) else { return false };
        for c in &self.circuits {
            let k = atlas.component_of[c[0]];
            if atlas.components[k].vertices != *c {
                return false;
            }
        }
        let ext = atlas.external_degrees(g);
        let circuit_ext = |i: usize| self.circuits[i].iter().map(|&v| ext[v]).sum::<usize>();
        if (0..=p).any(|i| circuit_ext(i) != 3) {
            return false;
        }
        let between = |i: usize, j: usize| {
            g.edges().iter().filter(|e| {
                let (a, b) = (owner[e.u], owner[e.v]);
                (a == i && b == j) || (a == j && b == i)
            })
            .count()
        };
        for (j, &[y, z]) in self.links.iter().enumerate() {
            if owner[y] != j || owner[z] != j + 1 || ext[y] != 1 || ext[z] != 1 {
                return false;
            }
            if g.edges_between(y, z).count() != 1 || between(j, j + 1) != 1 {
                return false;
            }
        }
        let ends_ok = owner[self.x0] == 0
            && ext[self.x0] == 2
            && self.x0 != self.links[0][0]
            && owner[self.xp] == p
            && ext[self.xp] == 2
            && self.xp != self.links[p - 1][1];
        let middles_ok = (1..p).all(|j| self.links[j - 1][1] != self.links[j][0]);
        ends_ok && middles_ok
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConflictReport {
    pub conflicts: Vec<Conflict>,
    /// Indices into `conflicts` of a largest family sharing no circuit.
    pub disjoint: Vec<usize>,
}

const CHAIN_CAP: usize = 20_000;

/// Enumerates conflicts among circuits that are whole generic components.
pub fn find_conflicts(g: &MultiGraph, atlas: &CircuitAtlas) -> ConflictReport {
    let n = g.vertex_count();
    let ext = atlas.external_degrees(g);
    let k = atlas.components.len();
    let single: Vec<bool> = atlas.components.iter().map(|c| c.circuits.len() == 1).collect();
    let comp_ext: Vec<usize> =
        atlas.components.iter().map(|c| c.vertices.iter().map(|&v| ext[v]).sum()).collect();
    let candidate: Vec<bool> = (0..k).map(|c| single[c] && comp_ext[c] == 3).collect();
    let of = &atlas.component_of;
    // External edges at each vertex as (other endpoint).
    let mut ext_nbrs: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    let mut between: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for e in atlas.external_edges(g) {
        ext_nbrs[e.u].push(e.v);
        ext_nbrs[e.v].push(e.u);
        let key = (of[e.u].min(of[e.v]), of[e.u].max(of[e.v]));
        *between.entry(key).or_default() += 1;
    }
    let single_link = |a: usize, b: usize| between.get(&(a.min(b), a.max(b))) == Some(&1);

    let mut seen: BTreeSet<(Vec<usize>, Vertex, Vertex, Vec<[Vertex; 2]>)> = BTreeSet::new();
    let mut conflicts = Vec::new();
    for c0 in (0..k).filter(|&c| candidate[c]) {
        let verts = &atlas.components[c0].vertices;
        let Some(&x0) = verts.iter().find(|&&v| ext[v] == 2) else { continue };
        for &y0 in verts.iter().filter(|&&v| v != x0 && ext[v] == 1) {
            let z1 = ext_nbrs[y0][0];
            let c1 = of[z1];
            if !candidate[c1] || c1 == c0 || ext[z1] != 1 || !single_link(c0, c1) {
                continue;
            }
            let mut chain = vec![c0, c1];
            let mut links = vec![[y0, z1]];
            extend_chain(
                atlas, &ext, &ext_nbrs, &candidate, &single_link, x0, &mut chain, &mut links,
                &mut |chain, links, xp| {
                    if seen.len() >= CHAIN_CAP {
                        return;
                    }
                    let fwd = (chain.to_vec(), x0, xp, links.to_vec());
                    let rev_links: Vec<[Vertex; 2]> = links.iter().rev().map(|&[a, b]| [b, a]).collect();
                    let rev = (chain.iter().rev().copied().collect::<Vec<_>>(), xp, x0, rev_links);
                    let key = fwd.clone().min(rev);
                    if seen.insert(key.clone()) {
                        conflicts.push(Conflict {
                            circuits: key.0.iter().map(|&c| atlas.components[c].vertices.clone()).collect(),
                            x0: key.1,
                            xp: key.2,
                            links: key.3,
                        });
                    }
                },
            );
        }
    }
    let sets: Vec<Vec<usize>> = conflicts
        .iter()
        .map(|c| c.circuits.iter().map(|vs| of[vs[0]]).collect())
        .collect();
    let disjoint = max_disjoint(&sets);
    ConflictReport { conflicts, disjoint }
}

#[allow(clippy::too_many_arguments)]
fn extend_chain(
    atlas: &CircuitAtlas,
    ext: &[usize],
    ext_nbrs: &[Vec<Vertex>],
    candidate: &[bool],
    single_link: &dyn Fn(usize, usize) -> bool,
    x0: Vertex,
    chain: &mut Vec<usize>,
    links: &mut Vec<[Vertex; 2]>,
    emit: &mut dyn FnMut(&[usize], &[[Vertex; 2]], Vertex),
) {
    let of = &atlas.component_of;
    let cur = *chain.last().expect("nonempty chain");
    let z = links.last().expect("nonempty links")[1];
    let verts = &atlas.components[cur].vertices;
    if let Some(&xp) = verts.iter().find(|&&v| v != z && ext[v] == 2) {
        let p1_ok = chain.len() > 2 || links[0][0] != x0;
        if p1_ok {
            emit(chain, links, xp);
        }
        return;
    }
    for &y in verts.iter().filter(|&&v| v != z && ext[v] == 1) {
        let w = ext_nbrs[y][0];
        let next = of[w];
        if !candidate[next] || chain.contains(&next) || ext[w] != 1 || !single_link(cur, next) {
            continue;
        }
        chain.push(next);
        links.push([y, w]);
        extend_chain(atlas, ext, ext_nbrs, candidate, single_link, x0, chain, links, emit);
        chain.pop();
        links.pop();
    }
}

/// Quotient shape where every component is one circuit and the quotient is
/// a tree with every edge doubled. Node `i` is component `i` of the atlas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleTree {
    /// For each node, its tree neighbours with the two edges joining them.
    pub adj: Vec<Vec<(usize, [EdgeId; 2])>>,
}

impl DoubleTree {
    pub fn of(atlas: &CircuitAtlas) -> Option<DoubleTree> {
        if !atlas.components_are_circuits() {
            return None;
        }
        let k = atlas.components.len();
        let mut pairs: BTreeMap<(usize, usize), Vec<EdgeId>> = BTreeMap::new();
        for e in atlas.quotient.edges() {
            pairs.entry((e.u.min(e.v), e.u.max(e.v))).or_default().push(e.id);
        }
        if pairs.len() + 1 != k || pairs.values().any(|ids| ids.len() != 2) {
            return None;
        }
        let mut adj = vec![Vec::new(); k];
        for (&(a, b), ids) in &pairs {
            adj[a].push((b, [ids[0], ids[1]]));
            adj[b].push((a, [ids[0], ids[1]]));
        }
        let t = DoubleTree { adj };
        (t.nodes_reachable(0, usize::MAX).len() == k).then_some(t)
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Nodes reachable from `start` without entering `blocked`.
    pub fn nodes_reachable(&self, start: usize, blocked: usize) -> Vec<usize> {
        let mut seen = vec![false; self.adj.len()];
        seen[start] = true;
        if blocked < seen.len() {
            seen[blocked] = true;
        }
        let mut queue = VecDeque::from([start]);
        let mut out = vec![start];
        while let Some(a) = queue.pop_front() {
            for &(b, _) in &self.adj[a] {
                if !seen[b] {
                    seen[b] = true;
                    out.push(b);
                    queue.push_back(b);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Tree path of nodes from `a` to `b`.
    pub fn path(&self, a: usize, b: usize) -> Vec<usize> {
        let mut pred = vec![usize::MAX; self.adj.len()];
        pred[a] = a;
        let mut queue = VecDeque::from([a]);
        while let Some(x) = queue.pop_front() {
            for &(y, _) in &self.adj[x] {
                if pred[y] == usize::MAX {
                    pred[y] = x;
                    queue.push_back(y);
                }
            }
        }
        let mut path = vec![b];
        while *path.last().expect("nonempty") != a {
            path.push(pred[*path.last().expect("nonempty")]);
        }
        path.reverse();
        path
    }

    /// The two edges joining adjacent nodes `a` and `b`.
    pub fn link(&self, a: usize, b: usize) -> [EdgeId; 2] {
        self.adj[a].iter().find(|&&(c, _)| c == b).expect("adjacent nodes").1
    }
}

/// Endpoint of edge `id` lying in component `node`.
pub(crate) fn end_in(g: &MultiGraph, atlas: &CircuitAtlas, id: EdgeId, node: usize) -> Vertex {
    let e = g.edge(id).expect("edge of g");
    if atlas.component_of[e.u] == node {
        e.u
    } else {
        e.v
    }
}

/// A double path of circuits `C = circuits[0], ..., C' = circuits[last]`
/// with an external-edge path from `x` in `C` to `y` in `C'`, and two
/// further branches of the quotient tree, `a` pendant at `x` and `b`
/// pendant at `y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Obstacle {
    pub circuits: Vec<Vec<Vertex>>,
    pub x: Vertex,
    pub y: Vertex,
    pub path: Vec<Vertex>,
    pub a: Vec<Vertex>,
    pub b: Vec<Vertex>,
}

impl Obstacle {
    pub fn check(&self, g: &MultiGraph) -> bool {
        let Ok(atlas) = CircuitAtlas::build(g) else { return false };
        let Some(tree) = DoubleTree::of(&atlas) else { return false };
        let n = g.vertex_count();
        if self.circuits.is_empty() || self.path.len() != self.circuits.len() {
            return false;
        }
        let mut nodes = Vec::new();
        for c in &self.circuits {
            let Some(&v) = c.first() else { return false };
            if v >= n {
                return false;
            }
            let k = atlas.component_of[v];
            if atlas.components[k].vertices != *c {
                return false;
            }
            nodes.push(k);
        }
        if nodes.windows(2).any(|w| !tree.adj[w[0]].iter().any(|&(b, _)| b == w[1])) {
            return false;
        }
        let distinct: BTreeSet<usize> = nodes.iter().copied().collect();
        if distinct.len() != nodes.len() {
            return false;
        }
        for (i, &v) in self.path.iter().enumerate() {
            if v >= n || atlas.component_of[v] != nodes[i] {
                return false;
            }
        }
        if self.path.windows(2).any(|w| g.edges_between(w[0], w[1]).next().is_none()) {
            return false;
        }
        if self.path[0] != self.x || *self.path.last().expect("nonempty") != self.y {
            return false;
        }
        // V_A and V_B must be distinct components of T - T_H.
        let mut removed = vec![false; tree.node_count()];
        nodes.iter().for_each(|&k| removed[k] = true);
        let side = |set: &[Vertex]| -> Option<Vec<usize>> {
            let first = *set.first()?;
            if first >= n {
                return None;
            }
            let start = atlas.component_of[first];
            if removed[start] {
                return None;
            }
            let mut seen = removed.clone();
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = vec![start];
            while let Some(a) = stack.pop() {
                for &(b, _) in &tree.adj[a] {
                    if !seen[b] {
                        seen[b] = true;
                        comp.push(b);
                        stack.push(b);
                    }
                }
            }
            let mut verts: Vec<Vertex> =
                comp.iter().flat_map(|&k| atlas.components[k].vertices.iter().copied()).collect();
            verts.sort_unstable();
            (verts == set).then_some(comp)
        };
        let (Some(ca), Some(cb)) = (side(&self.a), side(&self.b)) else { return false };
        if ca.contains(&cb[0]) {
            return false;
        }
        PendantSet { x: self.a.clone(), attach: self.x }.check(g)
            && PendantSet { x: self.b.clone(), attach: self.y }.check(g)
    }
}

/// All obstacles of a 2T-graph whose quotient is a double tree.
pub fn find_obstacles(g: &MultiGraph, atlas: &CircuitAtlas) -> Result<Vec<Obstacle>> {
    let tree = DoubleTree::of(atlas)
        .ok_or_else(|| Error::WrongShape("quotient is not a double tree of circuits".into()))?;
    // (node, vertex where both edges to the neighbour meet, neighbour)
    let mut attachments = Vec::new();
    for c in 0..tree.node_count() {
        for &(nb, [e1, e2]) in &tree.adj[c] {
            let x = end_in(g, atlas, e1, c);
            if x == end_in(g, atlas, e2, c) {
                attachments.push((c, x, nb));
            }
        }
    }
    let branch_vertices = |c: usize, nb: usize| -> Vec<Vertex> {
        let mut vs: Vec<Vertex> = tree
            .nodes_reachable(nb, c)
            .into_iter()
            .flat_map(|k| atlas.components[k].vertices.iter().copied())
            .collect();
        vs.sort_unstable();
        vs
    };
    let mut out = Vec::new();
    for (i, &(c, x, a)) in attachments.iter().enumerate() {
        for &(d, y, b) in &attachments[i + 1..] {
            let (nodes, path) = if c == d {
                if x != y || a == b {
                    continue;
                }
                (vec![c], vec![x])
            } else {
                let nodes = tree.path(c, d);
                if a == nodes[1] || b == nodes[nodes.len() - 2] {
                    continue;
                }
                match external_walk(g, atlas, &tree, &nodes, x, y) {
                    Some(path) => (nodes, path),
                    None => continue,
                }
            };
            out.push(Obstacle {
                circuits: nodes.iter().map(|&k| atlas.components[k].vertices.clone()).collect(),
                x,
                y,
                path,
                a: branch_vertices(c, a),
                b: branch_vertices(d, b),
            });
        }
    }
    Ok(out)
}

/// A path `x = p0, p1, ..., y` with `p_i` in node `nodes[i]`, consecutive
/// vertices joined by an edge between consecutive nodes.
fn external_walk(
    g: &MultiGraph,
    atlas: &CircuitAtlas,
    tree: &DoubleTree,
    nodes: &[usize],
    x: Vertex,
    y: Vertex,
) -> Option<Vec<Vertex>> {
    // layers[i]: reachable vertex in nodes[i] -> predecessor in nodes[i-1]
    let mut layers: Vec<BTreeMap<Vertex, Vertex>> = vec![BTreeMap::from([(x, x)])];
    for w in nodes.windows(2) {
        let mut next = BTreeMap::new();
        for id in tree.link(w[0], w[1]) {
            let p = end_in(g, atlas, id, w[0]);
            let q = end_in(g, atlas, id, w[1]);
            if layers.last().expect("nonempty").contains_key(&p) {
                next.entry(q).or_insert(p);
            }
        }
        if next.is_empty() {
            return None;
        }
        layers.push(next);
    }
    if !layers.last().expect("nonempty").contains_key(&y) {
        return None;
    }
    let mut path = vec![y];
    for layer in layers.iter().skip(1).rev() {
        path.push(layer[path.last().expect("nonempty")]);
    }
    path.reverse();
    Some(path)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "witness", rename_all = "snake_case")]
pub enum NonLinearEvidence {
    /// Three or more circuits through one vertex.
    SharedVertex { vertex: Vertex, circuits: Vec<Vec<Vertex>> },
    /// A circuit meeting three or more other circuits.
    BranchCircuit { circuit: Vec<Vertex>, neighbours: Vec<Vec<Vertex>> },
}

/// Why a graph has no good ordering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Refutation {
    #[serde(rename = "not-2T")]
    NotTwoTree { verdict: TwoTreeVerdict },
    #[serde(rename = "not-linear")]
    NotLinear { evidence: NonLinearEvidence },
    #[serde(rename = "three-pendant-sets")]
    ThreePendantSets { sets: Vec<PendantSet> },
    #[serde(rename = "three-disjoint-conflicts")]
    ThreeDisjointConflicts { conflicts: Vec<Conflict> },
    #[serde(rename = "obstacle")]
    Obstacle { obstacle: Obstacle },
    /// Exhaustive search found no good ordering.
    #[serde(rename = "brute-force")]
    BruteForce { vertices: usize },
}

impl Refutation {
    pub fn kind(&self) -> &'static str {
        match self {
            Refutation::NotTwoTree { .. } => "not-2T",
            Refutation::NotLinear { .. } => "not-linear",
            Refutation::ThreePendantSets { .. } => "three-pendant-sets",
            Refutation::ThreeDisjointConflicts { .. } => "three-disjoint-conflicts",
            Refutation::Obstacle { .. } => "obstacle",
            Refutation::BruteForce { .. } => "brute-force",
        }
    }

    /// Re-derives the evidence from `g` without trusting its producer.
    pub fn recheck(&self, g: &MultiGraph) -> bool {
        match self {
            Refutation::NotTwoTree { verdict } => match verdict {
                TwoTreeVerdict::CountMismatch { edges, expected } => {
                    *edges == g.edge_count() && *expected == 2 * g.vertex_count() - 2 && edges != expected
                }
                TwoTreeVerdict::Partition(p) => p.check(g),
                TwoTreeVerdict::Certificate(_) => false,
            },
            Refutation::NotLinear { evidence } => {
                let is_circuit = |c: &Vec<Vertex>| {
                    c.iter().all(|&v| v < g.vertex_count())
                        && induced_subgraph(g, c).is_ok_and(|h| h.vertex_count() == c.len() && is_generic_circuit(&h))
                };
                let distinct = |cs: &[Vec<Vertex>]| cs.iter().collect::<BTreeSet<_>>().len() == cs.len();
                is_two_tree(g)
                    && match evidence {
                        NonLinearEvidence::SharedVertex { vertex, circuits } => {
                            circuits.len() >= 3
                                && distinct(circuits)
                                && circuits.iter().all(|c| is_circuit(c) && c.contains(vertex))
                        }
                        NonLinearEvidence::BranchCircuit { circuit, neighbours } => {
                            neighbours.len() >= 3
                                && distinct(neighbours)
                                && is_circuit(circuit)
                                && neighbours.iter().all(|c| {
                                    c != circuit && is_circuit(c) && c.iter().any(|v| circuit.contains(v))
                                })
                        }
                    }
            }
            Refutation::ThreePendantSets { sets } => {
                sets.len() >= 3
                    && sets.iter().all(|p| p.check(g))
                    && sets.iter().enumerate().all(|(i, p)| {
                        sets[i + 1..].iter().all(|q| p.x.iter().all(|v| q.x.binary_search(v).is_err()))
                    })
            }
            Refutation::ThreeDisjointConflicts { conflicts } => {
                conflicts.len() >= 3
                    && conflicts.iter().all(|c| c.check(g))
                    && conflicts.iter().enumerate().all(|(i, c)| {
                        conflicts[i + 1..].iter().all(|d| c.circuits.iter().all(|x| !d.circuits.contains(x)))
                    })
            }
            Refutation::Obstacle { obstacle } => is_two_tree(g) && obstacle.check(g),
            Refutation::BruteForce { vertices } => {
                *vertices == g.vertex_count()
                    && brute_force_good_ordering(g, *vertices).is_ok_and(|found| found.is_none())
            }
        }
    }
}

/// First applicable certificate that `g` has no good ordering: not 2T, not
/// linear, three disjoint pendant sets, three disjoint conflicts, or an
/// obstacle when the quotient is a double tree.
pub fn refute(g: &MultiGraph) -> Result<Option<Refutation>> {
    let verdict = is_2t(g)?;
    if !verdict.is_2t() {
        return Ok(Some(Refutation::NotTwoTree { verdict }));
    }
    let atlas = CircuitAtlas::build(g)?;
    if let Some(evidence) = non_linear_evidence(&atlas)? {
        return Ok(Some(Refutation::NotLinear { evidence }));
    }
    let pendant = pendant_sets(g);
    if pendant.len() >= 3 {
        return Ok(Some(Refutation::ThreePendantSets { sets: pendant[..3].to_vec() }));
    }
    let report = find_conflicts(g, &atlas);
    if report.disjoint.len() >= 3 {
        let conflicts = report.disjoint[..3].iter().map(|&i| report.conflicts[i].clone()).collect();
        return Ok(Some(Refutation::ThreeDisjointConflicts { conflicts }));
    }
    if DoubleTree::of(&atlas).is_some() {
        if let Some(obstacle) = find_obstacles(g, &atlas)?.into_iter().next() {
            return Ok(Some(Refutation::Obstacle { obstacle }));
        }
    }
    Ok(None)
}

pub(crate) fn non_linear_evidence(atlas: &CircuitAtlas) -> Result<Option<NonLinearEvidence>> {
    let sets = |ids: &[usize]| ids.iter().map(|&c| atlas.circuits[c].clone()).collect::<Vec<_>>();
    for lin in linearity_of(atlas)? {
        match lin.linearity {
            Linearity::Hyperpath(_) => {}
            Linearity::NotLinear(NonLinearWitness::SharedVertex { vertex, circuits }) => {
                return Ok(Some(NonLinearEvidence::SharedVertex { vertex, circuits: sets(&circuits) }));
            }
            Linearity::NotLinear(NonLinearWitness::BranchCircuit { circuit, neighbours }) => {
                let mut nb = neighbours;
                nb.dedup();
                return Ok(Some(NonLinearEvidence::BranchCircuit {
                    circuit: atlas.circuits[circuit].clone(),
                    neighbours: sets(&nb),
                }));
            }
        }
    }
    Ok(None)
}
