use std::collections::{BTreeSet, BinaryHeap};
use std::cmp::Reverse;

use super::henneberg::{first_admissible, lift_raw};
use super::{certify, edge_between, GoodOrderingResult, Raw, RootSpec};
use crate::error::{Error, Result};
use crate::graph::{induced, BranchKind, EdgeId, MultiGraph, Provenance, Subgraph, Vertex};
use crate::sparsity::is_generic_circuit;

/// The two sides of a 2-separation along `{a, b}`. Both sides carry a new
/// edge `ab` with the same id `virtual_edge`.
#[derive(Debug, Clone)]
pub struct TwoSeparation {
    pub a: Vertex,
    pub b: Vertex,
    pub parts: [Subgraph; 2],
    pub virtual_edge: EdgeId,
}

/// Splits `g` along the non-adjacent cut `{a, b}`. The first part is the
/// component of `g - {a, b}` holding the smallest vertex; the second part
/// takes all other components.
pub fn two_separation(g: &MultiGraph, a: Vertex, b: Vertex) -> Result<TwoSeparation> {
    let n = g.vertex_count();
    for x in [a, b] {
        if x >= n {
            return Err(Error::VertexOutOfRange { vertex: x, n });
        }
    }
    if a == b || g.edges_between(a, b).next().is_some() {
        return Err(Error::NotACut { a, b });
    }
    let (count, comp) = g.components_without(&[a, b]);
    if count < 2 {
        return Err(Error::NotACut { a, b });
    }
    let first = (0..n).find(|&x| x != a && x != b).map(|x| comp[x]).expect("count >= 2");
    let mut side1 = vec![a, b];
    let mut side2 = vec![a, b];
    for x in 0..n {
        if x != a && x != b {
            if comp[x] == first { side1.push(x) } else { side2.push(x) }
        }
    }
    let id = g.next_edge_id();
    let mut parts = Vec::with_capacity(2);
    for side in [side1, side2] {
        let mut sub = induced(g, &side)?;
        let (la, lb) = (sub.local(a).expect("a kept"), sub.local(b).expect("b kept"));
        push_virtual(&mut sub.graph, la, lb, id)?;
        parts.push(sub);
    }
    let p2 = parts.pop().expect("two parts");
    let p1 = parts.pop().expect("two parts");
    Ok(TwoSeparation { a, b, parts: [p1, p2], virtual_edge: id })
}

fn push_virtual(g: &mut MultiGraph, a: Vertex, b: Vertex, id: EdgeId) -> Result<()> {
    let mut edges: Vec<_> = g.edges().to_vec();
    edges.push(crate::graph::Edge { id, u: a, v: b, provenance: Provenance::Virtual(id) });
    let names = g.names().to_vec();
    *g = crate::graph::graph_from_edge_list(g.vertex_count(), edges, names)?;
    Ok(())
}

/// Some non-adjacent pair whose removal disconnects `g`.
pub fn find_two_cut(g: &MultiGraph) -> Option<(Vertex, Vertex)> {
    let n = g.vertex_count();
    for a in 0..n {
        for b in a + 1..n {
            if g.edges_between(a, b).next().is_none() && g.components_without(&[a, b]).0 >= 2 {
                return Some((a, b));
            }
        }
    }
    None
}

/// At least four vertices and no separating set of size at most two.
pub fn is_three_connected(g: &MultiGraph) -> bool {
    let n = g.vertex_count();
    if n < 4 || !g.is_connected() {
        return false;
    }
    for a in 0..n {
        if g.components_without(&[a]).0 >= 2 {
            return false;
        }
        for b in a + 1..n {
            if g.components_without(&[a, b]).0 >= 2 {
                return false;
            }
        }
    }
    true
}

/// Good ordering of a generic circuit starting at `spec.s`, ending at
/// `spec.t`, with `spec.e` in the requested branching.
pub fn circuit_good_ordering(g: &MultiGraph, spec: RootSpec) -> Result<GoodOrderingResult> {
    spec.check(g)?;
    if !is_generic_circuit(g) {
        return Err(Error::Precondition("graph is not a generic circuit".into()));
    }
    let raw = solve(g, spec.s, spec.t, spec.e, spec.side)?;
    certify(g, raw.into_result(g.vertex_count())?, Some(&spec))
}

pub(crate) fn solve(g: &MultiGraph, s: Vertex, t: Vertex, e: EdgeId, side: BranchKind) -> Result<Raw> {
    match g.vertex_count() {
        2 => digon(g, s, t, e, side),
        4 => k4(g, s, t, e, side),
        n if n >= 5 => match find_two_cut(g) {
            Some((a, b)) => separated(g, two_separation(g, a, b)?, s, t, e, side),
            None => henneberg_step(g, s, t, e, side),
        },
        n => Err(Error::InvariantViolation(format!("no generic circuit has {n} vertices"))),
    }
}

fn put(raw: &mut Raw, id: EdgeId, side: BranchKind) {
    match side {
        BranchKind::Out => raw.out.insert(id),
        BranchKind::In => raw.inn.insert(id),
    };
}

fn digon(g: &MultiGraph, s: Vertex, t: Vertex, e: EdgeId, side: BranchKind) -> Result<Raw> {
    let f = g
        .edge_ids()
        .find(|&id| id != e)
        .ok_or_else(|| Error::InvariantViolation("digon without a second edge".into()))?;
    let mut raw = Raw { order: vec![s, t], out: BTreeSet::new(), inn: BTreeSet::new() };
    put(&mut raw, e, side);
    put(&mut raw, f, side.flipped());
    Ok(raw)
}

fn k4(g: &MultiGraph, s: Vertex, t: Vertex, e: EdgeId, side: BranchKind) -> Result<Raw> {
    let edge = g.edge(e).ok_or(Error::UnknownEdge(e))?;
    if !edge.touches(s) {
        return Ok(k4(g, t, s, e, side.flipped())?.reversed());
    }
    let w = edge.other(s);
    let others: Vec<Vertex> = (0..4).filter(|&x| x != s && x != t).collect();
    let (v2, v3) = if w == t {
        (others[0], others[1])
    } else if w == others[0] {
        (others[1], others[0])
    } else {
        (others[0], others[1])
    };
    let id = |a, b| edge_between(g, a, b);
    let (sv2, sv3, st, v2v3, v2t, v3t) = (id(s, v2)?, id(s, v3)?, id(s, t)?, id(v2, v3)?, id(v2, t)?, id(v3, t)?);
    let first = (BTreeSet::from([sv2, v2v3, st]), BTreeSet::from([sv3, v2t, v3t]));
    let second = (BTreeSet::from([sv2, v2t, sv3]), BTreeSet::from([st, v2v3, v3t]));
    let use_first = (e == st) == (side == BranchKind::Out);
    let (out, inn) = if use_first { first } else { second };
    Ok(Raw { order: vec![s, v2, v3, t], out, inn })
}

fn henneberg_step(g: &MultiGraph, s: Vertex, t: Vertex, e: EdgeId, side: BranchKind) -> Result<Raw> {
    let edge = g.edge(e).ok_or(Error::UnknownEdge(e))?;
    let mv = first_admissible(g, &[s, t, edge.u, edge.v])?
        .ok_or_else(|| Error::InvariantViolation("no admissible move avoiding the roots".into()))?;
    let sub = &mv.reduced;
    let local = |x: Vertex| sub.local(x).expect("root kept");
    let raw = solve(&sub.graph, local(s), local(t), e, side)?.lifted(sub);
    lift_raw(g, &mv, raw)
}

fn separated(g: &MultiGraph, sep: TwoSeparation, s: Vertex, t: Vertex, e: EdgeId, side: BranchKind) -> Result<Raw> {
    let vid = sep.virtual_edge;
    let holds = |i: usize, x: Vertex| sep.parts[i].local(x).is_some();
    let has_edge = |i: usize| sep.parts[i].graph.has_edge(e);
    let sub_solve = |i: usize, a: Vertex, b: Vertex, f: EdgeId, sd: BranchKind| -> Result<Raw> {
        let p = &sep.parts[i];
        Ok(solve(&p.graph, p.local(a).expect("in part"), p.local(b).expect("in part"), f, sd)?.lifted(p))
    };
    let side_of = |raw: &Raw| raw.side_of(vid).ok_or_else(|| Error::InvariantViolation("virtual edge unused".into()));

    // roots and edge inside one part
    if let Some(i) = (0..2).find(|&i| holds(i, s) && holds(i, t) && has_edge(i)) {
        let main = sub_solve(i, s, t, e, side)?;
        let (p, q) = ordered_pair(&main.order, sep.a, sep.b);
        let other = sub_solve(1 - i, p, q, vid, side_of(&main)?.flipped())?;
        return Ok(splice(main, other, p, vid));
    }
    // roots in one part, edge in the other at a root on the cut
    if let Some(i) = (0..2).find(|&i| holds(i, s) && holds(i, t)) {
        let edge = g.edge(e).ok_or(Error::UnknownEdge(e))?;
        let on_cut = |x: Vertex| x == sep.a || x == sep.b;
        let partner = |x: Vertex| if x == sep.a { sep.b } else { sep.a };
        let (p, q) = if edge.touches(s) && on_cut(s) {
            (s, partner(s))
        } else if edge.touches(t) && on_cut(t) {
            (partner(t), t)
        } else {
            return Err(Error::InvariantViolation("edge leaves the root part away from the cut".into()));
        };
        let other = sub_solve(1 - i, p, q, e, side)?;
        let main = sub_solve(i, s, t, vid, side_of(&other)?.flipped())?;
        return Ok(splice(main, other, p, vid));
    }
    // roots strictly inside different parts
    let is = if holds(0, s) { 0 } else { 1 };
    let it = 1 - is;
    let (v, u) = (sep.a, sep.b);
    let (first, second) = if has_edge(is) {
        let r1 = sub_solve(is, s, v, e, side)?;
        let r2 = sub_solve(it, u, t, vid, side_of(&r1)?.flipped())?;
        (r1, r2)
    } else {
        let r2 = sub_solve(it, u, t, e, side)?;
        let r1 = sub_solve(is, s, v, vid, side_of(&r2)?.flipped())?;
        (r1, r2)
    };
    merge(g, &sep, [is, it], first, second)
}

fn ordered_pair(order: &[Vertex], a: Vertex, b: Vertex) -> (Vertex, Vertex) {
    let pa = order.iter().position(|&x| x == a);
    let pb = order.iter().position(|&x| x == b);
    if pa < pb { (a, b) } else { (b, a) }
}

/// Inserts the interior of `other` (whose ends are `p` and the partner cut
/// vertex) right after `p` in `main`, and drops the virtual edge.
fn splice(main: Raw, other: Raw, p: Vertex, vid: EdgeId) -> Raw {
    let at = main.order.iter().position(|&x| x == p).expect("p in main");
    let inner = &other.order[1..other.order.len() - 1];
    let mut order = Vec::with_capacity(main.order.len() + inner.len());
    order.extend_from_slice(&main.order[..=at]);
    order.extend_from_slice(inner);
    order.extend_from_slice(&main.order[at + 1..]);
    let mut out: BTreeSet<EdgeId> = main.out.union(&other.out).copied().collect();
    let mut inn: BTreeSet<EdgeId> = main.inn.union(&other.inn).copied().collect();
    out.remove(&vid);
    inn.remove(&vid);
    Raw { order, out, inn }
}

/// Combines solutions of the two parts when the roots lie on different
/// sides: orient every edge as its part does and sort topologically.
fn merge(g: &MultiGraph, sep: &TwoSeparation, idx: [usize; 2], first: Raw, second: Raw) -> Result<Raw> {
    let n = g.vertex_count();
    let mut pos = [vec![usize::MAX; n], vec![usize::MAX; n]];
    for (k, raw) in [&first, &second].into_iter().enumerate() {
        for (i, &x) in raw.order.iter().enumerate() {
            pos[k][x] = i;
        }
    }
    let mut succ = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for edge in g.edges() {
        let k = if sep.parts[idx[0]].graph.has_edge(edge.id) { 0 } else { 1 };
        let (a, b) = if pos[k][edge.u] < pos[k][edge.v] { (edge.u, edge.v) } else { (edge.v, edge.u) };
        succ[a].push(b);
        indeg[b] += 1;
    }
    let mut heap: BinaryHeap<Reverse<Vertex>> = (0..n).filter(|&x| indeg[x] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(x)) = heap.pop() {
        order.push(x);
        for &y in &succ[x] {
            indeg[y] -= 1;
            if indeg[y] == 0 {
                heap.push(Reverse(y));
            }
        }
    }
    if order.len() != n {
        return Err(Error::InvariantViolation("merged orientation has a cycle".into()));
    }
    let vid = sep.virtual_edge;
    let mut out: BTreeSet<EdgeId> = first.out.union(&second.out).copied().collect();
    let mut inn: BTreeSet<EdgeId> = first.inn.union(&second.inn).copied().collect();
    out.remove(&vid);
    inn.remove(&vid);
    Ok(Raw { order, out, inn })
}
