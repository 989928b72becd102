use super::matching::circuit_with_roots;
use super::{certify, GoodOrderingResult};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph};
use crate::sparsity::{is_generic_circuit, PebbleGame};

/// Spanning generic circuit of a simple 4-regular 4-connected graph in
/// which every edge lies on a triangle: drop two disjoint edges.
pub fn four_regular_spanning_circuit(g: &MultiGraph, e: EdgeId, f: EdgeId) -> Result<MultiGraph> {
    let ee = g.edge(e).ok_or(Error::UnknownEdge(e))?;
    let ff = g.edge(f).ok_or(Error::UnknownEdge(f))?;
    if !g.is_simple() {
        return Err(Error::Precondition("graph is not simple".into()));
    }
    if let Some(v) = g.degrees().iter().position(|&d| d != 4) {
        return Err(Error::Precondition(format!("graph is not 4-regular: vertex {v}")));
    }
    if !is_four_connected(g) {
        return Err(Error::Precondition("graph is not 4-connected".into()));
    }
    if let Some(bad) = g.edges().iter().find(|x| !on_triangle(g, x.u, x.v)) {
        return Err(Error::Precondition(format!("edge {} lies on no triangle", bad.id)));
    }
    if e == f || ee.touches(ff.u) || ee.touches(ff.v) {
        return Err(Error::Precondition("the two edges are not vertex-disjoint".into()));
    }
    let h = g.without_edges(&[e, f]);
    if !is_generic_circuit(&h) {
        return Err(Error::InvariantViolation("removing two disjoint edges did not leave a generic circuit".into()));
    }
    Ok(h)
}

fn on_triangle(g: &MultiGraph, u: usize, v: usize) -> bool {
    let nu = g.neighbours(u);
    g.neighbours(v).iter().any(|x| nu.binary_search(x).is_ok())
}

fn is_four_connected(g: &MultiGraph) -> bool {
    let n = g.vertex_count();
    if n < 5 || !g.is_connected() {
        return false;
    }
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                let mut cut = vec![a, b, c];
                cut.dedup();
                if g.components_without(&cut).0 >= 2 {
                    return false;
                }
            }
        }
    }
    true
}

/// A generic circuit on all vertices of `g` using only edges of `g`.
pub fn find_spanning_circuit(g: &MultiGraph) -> Option<MultiGraph> {
    let n = g.vertex_count();
    if n < 2 || g.edge_count() < 2 * n - 2 {
        return None;
    }
    if g.edge_count() == 2 * n - 2 {
        return is_generic_circuit(g).then(|| g.clone());
    }
    let edges = g.edges();
    let m = edges.len();
    for shift in 0..m {
        let mut game = PebbleGame::new(n, 2, 3).ok()?;
        let mut basis = Vec::new();
        for k in 0..m {
            let e = &edges[(k + shift) % m];
            match game.try_insert(e.id, e.u, e.v) {
                Ok(()) => basis.push(e),
                Err(reach) if reach.len() == n => {
                    let mut keep: Vec<EdgeId> = basis.iter().map(|b| b.id).collect();
                    keep.push(e.id);
                    let drop: Vec<EdgeId> = g.edge_ids().filter(|id| !keep.contains(id)).collect();
                    let h = g.without_edges(&drop);
                    if is_generic_circuit(&h) {
                        return Some(h);
                    }
                }
                Err(_) => {}
            }
        }
    }
    if g.is_simple() && g.degrees().iter().all(|&d| d == 4) {
        for e in edges {
            for f in edges {
                if e.id < f.id && !e.touches(f.u) && !e.touches(f.v) {
                    if let Ok(h) = four_regular_spanning_circuit(g, e.id, f.id) {
                        return Some(h);
                    }
                }
            }
        }
    }
    None
}

/// Good ordering of a graph containing a spanning generic circuit: the
/// circuit's certificate already certifies the whole graph.
pub fn spanning_circuit_good_ordering(g: &MultiGraph) -> Result<GoodOrderingResult> {
    let h = find_spanning_circuit(g).ok_or_else(|| Error::NotApplicable("no spanning generic circuit found".into()))?;
    let e = &h.edges()[0];
    let raw = circuit_with_roots(&h, e.u, e.v)?;
    certify(g, raw.into_result(g.vertex_count())?, None)
}
