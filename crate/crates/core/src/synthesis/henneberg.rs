use serde::Serialize;

use super::{edge_between, GoodOrderingResult, Raw};
use crate::error::{Error, Result};
use crate::graph::{induced, EdgeId, MultiGraph, Provenance, Subgraph, Vertex};
use crate::sparsity::is_generic_circuit;
use crate::synthesis::circuit::is_three_connected;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveClass {
    Feasible,
    Admissible,
    Inadmissible,
}

/// Inverse Henneberg move: `z` removed, `u`-`v` added.
#[derive(Debug, Clone)]
pub struct HennebergMove {
    pub z: Vertex,
    pub u: Vertex,
    pub v: Vertex,
    pub w: Vertex,
    /// The reduced graph; `reduced.parent` maps its vertices back.
    pub reduced: Subgraph,
    /// Id of the added edge inside `reduced.graph`.
    pub added: EdgeId,
    pub class: MoveClass,
}

fn three_neighbours(g: &MultiGraph, z: Vertex) -> Result<[Vertex; 3]> {
    if z >= g.vertex_count() {
        return Err(Error::VertexOutOfRange { vertex: z, n: g.vertex_count() });
    }
    let inc: Vec<Vertex> = g.edges().iter().filter(|e| e.touches(z)).map(|e| e.other(z)).collect();
    let mut distinct = inc.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if inc.len() != 3 || distinct.len() != 3 {
        return Err(Error::InvalidMove(format!("vertex {z} does not have three distinct neighbours")));
    }
    Ok([distinct[0], distinct[1], distinct[2]])
}

fn reduce(g: &MultiGraph, z: Vertex, u: Vertex, v: Vertex) -> Result<(Subgraph, EdgeId)> {
    let rest: Vec<Vertex> = (0..g.vertex_count()).filter(|&x| x != z).collect();
    let mut sub = induced(g, &rest)?;
    let (lu, lv) = (sub.local(u).expect("u kept"), sub.local(v).expect("v kept"));
    let id = sub.graph.next_edge_id();
    let added = sub.graph.add_edge_with(lu, lv, Provenance::Virtual(id))?;
    Ok((sub, added))
}

/// Deletes `z` (degree 3, distinct neighbours) and joins the two chosen neighbours.
pub fn henneberg_move(g: &MultiGraph, z: Vertex, add: (Vertex, Vertex)) -> Result<HennebergMove> {
    let nb = three_neighbours(g, z)?;
    let (u, v) = add;
    if u == v || !nb.contains(&u) || !nb.contains(&v) {
        return Err(Error::InvalidMove(format!("{u} and {v} are not two neighbours of {z}")));
    }
    let w = nb.into_iter().find(|&x| x != u && x != v).expect("three distinct neighbours");
    let (reduced, added) = reduce(g, z, u, v)?;
    let class = if !is_generic_circuit(&reduced.graph) {
        MoveClass::Inadmissible
    } else if is_three_connected(&reduced.graph) {
        MoveClass::Feasible
    } else {
        MoveClass::Admissible
    };
    Ok(HennebergMove { z, u, v, w, reduced, added, class })
}

/// All admissible inverse moves of a 3-connected generic circuit with at
/// least five vertices.
pub fn find_admissible_moves(g: &MultiGraph) -> Result<Vec<HennebergMove>> {
    if g.vertex_count() < 5 || !is_generic_circuit(g) || !is_three_connected(g) {
        return Err(Error::WrongShape("expected a 3-connected generic circuit on at least five vertices".into()));
    }
    let mut found = Vec::new();
    for z in 0..g.vertex_count() {
        let Ok(nb) = three_neighbours(g, z) else { continue };
        for (u, v) in [(nb[0], nb[1]), (nb[0], nb[2]), (nb[1], nb[2])] {
            let mv = henneberg_move(g, z, (u, v))?;
            if mv.class != MoveClass::Inadmissible {
                found.push(mv);
            }
        }
    }
    if found.is_empty() {
        return Err(Error::InvariantViolation("no admissible move in a 3-connected generic circuit".into()));
    }
    Ok(found)
}

/// First admissible move at a vertex outside `avoid`.
pub(crate) fn first_admissible(g: &MultiGraph, avoid: &[Vertex]) -> Result<Option<HennebergMove>> {
    for z in 0..g.vertex_count() {
        if avoid.contains(&z) {
            continue;
        }
        let Ok(nb) = three_neighbours(g, z) else { continue };
        for (u, v) in [(nb[0], nb[1]), (nb[0], nb[2]), (nb[1], nb[2])] {
            let (reduced, added) = reduce(g, z, u, v)?;
            if is_generic_circuit(&reduced.graph) {
                let w = nb.into_iter().find(|&x| x != u && x != v).expect("three distinct neighbours");
                return Ok(Some(HennebergMove { z, u, v, w, reduced, added, class: MoveClass::Admissible }));
            }
        }
    }
    Ok(None)
}

/// Extends a certificate of the reduced graph to `g` by inserting `z`.
pub fn lift_ordering(g: &MultiGraph, mv: &HennebergMove, sub: &GoodOrderingResult) -> Result<GoodOrderingResult> {
    sub.verify(&mv.reduced.graph).map_err(Error::InvalidCertificate)?;
    let raw = Raw { order: sub.ordering.as_slice().to_vec(), out: sub.pair.out.arcs.clone(), inn: sub.pair.inn.arcs.clone() };
    let lifted = lift_raw(g, mv, raw.lifted(&mv.reduced))?;
    super::certify(g, lifted.into_result(g.vertex_count())?, None)
}

/// Lifting on a solution already expressed in the labels of `g`.
pub(crate) fn lift_raw(g: &MultiGraph, mv: &HennebergMove, raw: Raw) -> Result<Raw> {
    let flip = raw.out.contains(&mv.added);
    let mut raw = if flip { raw.reversed() } else { raw };
    if !raw.inn.remove(&mv.added) {
        return Err(Error::InvalidCertificate("the added edge is in neither branching".into()));
    }
    let mut pos = vec![usize::MAX; g.vertex_count()];
    for (i, &x) in raw.order.iter().enumerate() {
        pos[x] = i;
    }
    let (mut u, mut v) = (mv.u, mv.v);
    if pos[u] > pos[v] {
        std::mem::swap(&mut u, &mut v);
    }
    let w = mv.w;
    let (zu, zv, zw) = (edge_between(g, mv.z, u)?, edge_between(g, mv.z, v)?, edge_between(g, mv.z, w)?);
    let after = if pos[w] > pos[v] {
        raw.inn.extend([zu, zw]);
        raw.out.insert(zv);
        v
    } else {
        raw.inn.extend([zu, zv]);
        raw.out.insert(zw);
        if pos[w] > pos[u] { w } else { u }
    };
    raw.order.insert(pos[after] + 1, mv.z);
    Ok(if flip { raw.reversed() } else { raw })
}
