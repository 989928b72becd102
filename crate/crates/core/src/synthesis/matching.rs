use std::collections::BTreeSet;

use super::circuit::solve;
use super::{certify, GoodOrderingResult, Raw};
use crate::atlas::disjoint_circuit_partition;
use crate::error::{Error, Result};
use crate::graph::{contract_partition, induced, BranchKind, EdgeId, MultiGraph, Provenance, Vertex};
use crate::sparsity::{is_2t, is_two_tree};

/// Good ordering of a 2T-graph whose vertices split into generic circuits
/// joined by a matching.
pub fn matching_good_ordering(g: &MultiGraph) -> Result<GoodOrderingResult> {
    if !is_2t(g)?.is_2t() {
        return Err(Error::Precondition("graph is not 2T".into()));
    }
    let parts = disjoint_circuit_partition(g)?
        .ok_or_else(|| Error::Precondition("no-partition: vertices do not split into generic circuits".into()))?;
    let mut part_of = vec![0; g.vertex_count()];
    for (i, p) in parts.iter().enumerate() {
        for &v in p {
            part_of[v] = i;
        }
    }
    let mut used = vec![false; g.vertex_count()];
    for e in g.edges().iter().filter(|e| part_of[e.u] != part_of[e.v]) {
        for x in [e.u, e.v] {
            if std::mem::replace(&mut used[x], true) {
                return Err(Error::Precondition(format!("not-matching: vertex {x} has two external edges")));
            }
        }
    }
    let raw = compose(g, &parts)?;
    certify(g, raw.into_result(g.vertex_count())?, None)
}

/// Good ordering of a single generic circuit with roots `s` and `t`.
pub(crate) fn circuit_with_roots(g: &MultiGraph, s: Vertex, t: Vertex) -> Result<Raw> {
    let e = g
        .edges()
        .iter()
        .find(|e| e.touches(s))
        .map(|e| e.id)
        .ok_or_else(|| Error::InvariantViolation(format!("vertex {s} is isolated")))?;
    solve(g, s, t, e, BranchKind::Out)
}

fn compose(g: &MultiGraph, parts: &[Vec<Vertex>]) -> Result<Raw> {
    if parts.len() == 1 {
        let e = g.edges().first().ok_or_else(|| Error::InvariantViolation("empty circuit".into()))?;
        return solve(g, e.u, e.v, e.id, BranchKind::Out);
    }
    let q = contract_partition(g, parts)?;
    let qdeg = q.graph.degrees();
    let external = |k: usize| -> Vec<(EdgeId, Vertex, Vertex)> {
        // (edge, outside end, inside end)
        g.edges()
            .iter()
            .filter(|e| (q.part_of[e.u] == k) != (q.part_of[e.v] == k))
            .map(|e| if q.part_of[e.v] == k { (e.id, e.u, e.v) } else { (e.id, e.v, e.u) })
            .collect()
    };
    if let Some(k) = (0..parts.len()).find(|&k| qdeg[k] == 2) {
        let ext = external(k);
        let rest: Vec<Vertex> = (0..g.vertex_count()).filter(|&x| q.part_of[x] != k).collect();
        let sub = induced(g, &rest)?;
        let sub_parts = relabel_parts(parts, k, &sub.parent);
        let base = compose(&sub.graph, &sub_parts)?.lifted(&sub);
        let pos = positions(&base.order, g.vertex_count());
        let (mut a, mut b) = (ext[0], ext[1]);
        if pos[a.1] > pos[b.1] {
            std::mem::swap(&mut a, &mut b);
        }
        let inner = circuit_on(g, &parts[k], a.2, b.2)?;
        let mut raw = insert_after(base, inner, a.1, &pos);
        raw.out.insert(a.0);
        raw.inn.insert(b.0);
        return Ok(raw);
    }
    let k = (0..parts.len())
        .find(|&k| qdeg[k] == 3)
        .ok_or_else(|| Error::InvariantViolation("quotient has no vertex of degree 2 or 3".into()))?;
    let ext = external(k);
    let rest: Vec<Vertex> = (0..g.vertex_count()).filter(|&x| q.part_of[x] != k).collect();
    let sub_parts_global: Vec<Vec<Vertex>> =
        parts.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, p)| p.clone()).collect();
    for (i, j, l) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        let (e1, e2, e3) = (ext[i], ext[j], ext[l]);
        if q.part_of[e1.1] == q.part_of[e2.1] {
            continue;
        }
        let mut sub = induced(g, &rest)?;
        let (l1, l2) = (sub.local(e1.1).expect("kept"), sub.local(e2.1).expect("kept"));
        let id = sub.graph.next_edge_id();
        let added = sub.graph.add_edge_with(l1, l2, Provenance::Virtual(id))?;
        let sub_parts = relabel_parts(&sub_parts_global, usize::MAX, &sub.parent);
        if !is_two_tree(&contract_partition(&sub.graph, &sub_parts)?.graph) {
            continue;
        }
        let base = compose(&sub.graph, &sub_parts)?.lifted(&sub);
        return expand(g, &parts[k], base, added, [e1, e2, e3]);
    }
    Err(Error::InvariantViolation("no pair of external edges keeps the quotient 2T".into()))
}

/// Re-inserts a circuit with three external edges after the contraction
/// that replaced it by the edge `added` between the outer ends of the first two.
fn expand(g: &MultiGraph, circuit: &[Vertex], base: Raw, added: EdgeId, ext: [(EdgeId, Vertex, Vertex); 3]) -> Result<Raw> {
    let flip = base.out.contains(&added);
    let mut base = if flip { base.reversed() } else { base };
    if !base.inn.remove(&added) {
        return Err(Error::InvariantViolation("contracted edge is in neither branching".into()));
    }
    let pos = positions(&base.order, g.vertex_count());
    let [mut e1, mut e2, e3] = ext;
    if pos[e1.1] > pos[e2.1] {
        std::mem::swap(&mut e1, &mut e2);
    }
    let (p1, p2, p3) = (pos[e1.1], pos[e2.1], pos[e3.1]);
    let mut raw = if p3 > p2 {
        let inner = circuit_on(g, circuit, e2.2, e3.2)?;
        let mut raw = insert_after(base, inner, e2.1, &pos);
        raw.out.insert(e2.0);
        raw.inn.extend([e1.0, e3.0]);
        raw
    } else {
        let at = if p3 < p1 { e1.1 } else { e3.1 };
        let inner = circuit_on(g, circuit, e3.2, e2.2)?;
        let mut raw = insert_after(base, inner, at, &pos);
        raw.out.insert(e3.0);
        raw.inn.extend([e1.0, e2.0]);
        raw
    };
    if flip {
        raw = raw.reversed();
    }
    Ok(raw)
}

/// Good ordering of the circuit induced by `set` from `s` to `t`, in the labels of `g`.
pub(crate) fn circuit_on(g: &MultiGraph, set: &[Vertex], s: Vertex, t: Vertex) -> Result<Raw> {
    let sub = induced(g, set)?;
    let raw = circuit_with_roots(&sub.graph, sub.local(s).expect("root in set"), sub.local(t).expect("root in set"))?;
    Ok(raw.lifted(&sub))
}

pub(crate) fn positions(order: &[Vertex], n: usize) -> Vec<usize> {
    let mut pos = vec![usize::MAX; n];
    for (i, &x) in order.iter().enumerate() {
        pos[x] = i;
    }
    pos
}

/// Places the whole of `inner` right after `at` and unions the branchings.
pub(crate) fn insert_after(base: Raw, inner: Raw, at: Vertex, pos: &[usize]) -> Raw {
    let cut = pos[at] + 1;
    let mut order = base.order[..cut].to_vec();
    order.extend_from_slice(&inner.order);
    order.extend_from_slice(&base.order[cut..]);
    let out: BTreeSet<EdgeId> = base.out.union(&inner.out).copied().collect();
    let inn: BTreeSet<EdgeId> = base.inn.union(&inner.inn).copied().collect();
    Raw { order, out, inn }
}

fn relabel_parts(parts: &[Vec<Vertex>], skip: usize, parent: &[Vertex]) -> Vec<Vec<Vertex>> {
    parts
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != skip)
        .map(|(_, p)| p.iter().map(|v| parent.binary_search(v).expect("vertex kept")).collect())
        .collect()
}
