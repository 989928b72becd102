//! Instance generators. Randomness comes only from the explicit seed, and
//! every generator checks the defining property of what it returns.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::atlas::{disjoint_circuit_partition, CircuitAtlas};
use crate::diagnostics::{find_conflicts, refute, DoubleTree};
use crate::error::{Error, Result};
use crate::graph::{MultiGraph, Vertex};
use crate::sparsity::{is_generic_circuit, is_two_tree};
use crate::synthesis::is_three_connected;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ensure(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvariantViolation(format!("generated instance fails its check: {what}")))
    }
}

pub fn digon() -> MultiGraph {
    MultiGraph::from_edges(2, &[(0, 1), (0, 1)]).expect("valid digon")
}

pub fn k4() -> MultiGraph {
    MultiGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).expect("valid K4")
}

/// Wheel with hub 0 and rim `1..=k`.
pub fn wheel(k: usize) -> Result<MultiGraph> {
    if k < 3 {
        return Err(Error::InvalidParameters("a wheel needs at least three rim vertices".into()));
    }
    let mut pairs = Vec::with_capacity(2 * k);
    for i in 1..=k {
        pairs.push((0, i));
        pairs.push((i, i % k + 1));
    }
    let g = MultiGraph::from_edges(k + 1, &pairs)?;
    ensure(is_generic_circuit(&g), "wheel is a generic circuit")?;
    Ok(g)
}

/// Generic circuit on `n` vertices grown from K4 by random edge splits:
/// delete an edge `uv`, add a vertex joined to `u`, `v` and a third vertex.
pub fn henneberg_circuit(n: usize, seed: u64) -> Result<MultiGraph> {
    if n < 4 {
        return Err(Error::InvalidParameters("Henneberg chains start from K4 (n >= 4)".into()));
    }
    let mut r = rng(seed);
    let mut pairs = k4().edge_pairs();
    for z in 4..n {
        let i = r.gen_range(0..pairs.len());
        let (u, v) = pairs.swap_remove(i);
        let w = loop {
            let w = r.gen_range(0..z);
            if w != u && w != v {
                break w;
            }
        };
        pairs.extend([(u, z), (v, z), (w, z)]);
    }
    let g = MultiGraph::from_edges(n, &pairs)?;
    ensure(is_generic_circuit(&g), "Henneberg chain is a generic circuit")?;
    ensure(is_three_connected(&g), "Henneberg chain is 3-connected")?;
    Ok(g)
}

/// 2-sum along `e1` of `g1` and `e2` of `g2`: both edges are deleted, the
/// ends of `e2` are glued to the ends of `e1`, the other vertices of `g2`
/// follow those of `g1`.
pub fn two_sum(g1: &MultiGraph, e1: usize, g2: &MultiGraph, e2: usize) -> Result<MultiGraph> {
    let a = g1.edge(e1).ok_or(Error::UnknownEdge(e1))?;
    let b = g2.edge(e2).ok_or(Error::UnknownEdge(e2))?;
    let mut map = vec![usize::MAX; g2.vertex_count()];
    map[b.u] = a.u;
    map[b.v] = a.v;
    let mut next = g1.vertex_count();
    for m in map.iter_mut().filter(|m| **m == usize::MAX) {
        *m = next;
        next += 1;
    }
    let mut pairs: Vec<(Vertex, Vertex)> = g1.edges().iter().filter(|e| e.id != e1).map(|e| (e.u, e.v)).collect();
    pairs.extend(g2.edges().iter().filter(|e| e.id != e2).map(|e| (map[e.u], map[e.v])));
    MultiGraph::from_edges(next, &pairs)
}

/// Chain of `pieces` circuits (K4s and small Henneberg circuits) glued by
/// 2-sums at random edges.
pub fn two_sum_chain(pieces: usize, seed: u64) -> Result<MultiGraph> {
    if pieces == 0 {
        return Err(Error::InvalidParameters("need at least one piece".into()));
    }
    let mut r = rng(seed);
    let piece = |r: &mut ChaCha8Rng| -> Result<MultiGraph> {
        let size = r.gen_range(4..=6);
        henneberg_circuit(size, r.gen())
    };
    let mut g = piece(&mut r)?;
    for _ in 1..pieces {
        let h = piece(&mut r)?;
        let e1 = g.edges()[r.gen_range(0..g.edge_count())].id;
        let e2 = h.edges()[r.gen_range(0..h.edge_count())].id;
        g = two_sum(&g, e1, &h, e2)?.canonical();
    }
    ensure(is_generic_circuit(&g), "2-sum chain is a generic circuit")?;
    Ok(g)
}

/// Digons `{2i, 2i+1}` joined in a path by the edges `2i`-`2i+2` and `2i+1`-`2i+3`.
pub fn digon_path(k: usize) -> Result<MultiGraph> {
    if k == 0 {
        return Err(Error::InvalidParameters("need at least one digon".into()));
    }
    let mut pairs = Vec::new();
    for i in 0..k {
        pairs.extend([(2 * i, 2 * i + 1), (2 * i, 2 * i + 1)]);
        if i + 1 < k {
            pairs.extend([(2 * i, 2 * i + 2), (2 * i + 1, 2 * i + 3)]);
        }
    }
    let g = MultiGraph::from_edges(2 * k, &pairs)?;
    check_double_tree(&g)?;
    Ok(g)
}

fn check_double_tree(g: &MultiGraph) -> Result<()> {
    ensure(is_two_tree(g), "instance is 2T")?;
    let atlas = CircuitAtlas::build(g)?;
    ensure(DoubleTree::of(&atlas).is_some(), "quotient is a double tree of circuits")
}

/// Circuits `C = {x, w}`, `A = {a1, a2}`, `B = {b1, b2}` (digons) with
/// `a1, a2, b1, b2` all joined to `x`. Vertices: x = 0, w = 1, a = 2, 3, b = 4, 5.
pub fn obstacle_star() -> Result<MultiGraph> {
    let pairs = [(0, 1), (0, 1), (2, 3), (2, 3), (4, 5), (4, 5), (0, 2), (0, 3), (0, 4), (0, 5)];
    let g = MultiGraph::from_edges(6, &pairs)?;
    check_double_tree(&g)?;
    ensure(refute(&g)?.is_some(), "obstacle star is refuted")?;
    Ok(g)
}

/// Places `circuit` at vertex offset `base`.
fn place(pairs: &mut Vec<(Vertex, Vertex)>, circuit: &MultiGraph, base: usize) {
    pairs.extend(circuit.edges().iter().map(|e| (e.u + base, e.v + base)));
}

fn small_circuit(size: usize, seed: u64) -> Result<MultiGraph> {
    match size {
        0..=2 => Ok(digon()),
        3 | 4 => Ok(k4()),
        n => henneberg_circuit(n, seed),
    }
}

/// Random tree of `k` circuits (digons, or K4s when `allow_k4`), each tree
/// edge realised by two external edges with random ends.
pub fn random_double_tree(k: usize, allow_k4: bool, seed: u64) -> Result<MultiGraph> {
    if k == 0 {
        return Err(Error::InvalidParameters("need at least one circuit".into()));
    }
    let mut r = rng(seed);
    let mut offsets = Vec::with_capacity(k);
    let mut sizes = Vec::with_capacity(k);
    let mut pairs = Vec::new();
    let mut n = 0;
    for _ in 0..k {
        let size = if allow_k4 && r.gen_bool(0.3) { 4 } else { 2 };
        place(&mut pairs, &small_circuit(size, 0)?, n);
        offsets.push(n);
        sizes.push(size);
        n += size;
    }
    for i in 1..k {
        let j = r.gen_range(0..i);
        let end = |r: &mut ChaCha8Rng| {
            (offsets[i] + r.gen_range(0..sizes[i]), offsets[j] + r.gen_range(0..sizes[j]))
        };
        let first = end(&mut r);
        // two parallel link edges would form a digon of their own
        let second = loop {
            let e = end(&mut r);
            if e != first {
                break e;
            }
        };
        pairs.extend([first, second]);
    }
    let g = MultiGraph::from_edges(n, &pairs)?;
    check_double_tree(&g)?;
    Ok(g)
}

/// Random parent array of a spanning tree on `k` nodes.
fn random_tree(r: &mut ChaCha8Rng, k: usize) -> Vec<(usize, usize)> {
    let mut perm: Vec<usize> = (0..k).collect();
    perm.shuffle(r);
    (1..k).map(|i| (perm[i], perm[r.gen_range(0..i)])).collect()
}

/// `k` generic circuits whose external edges form a matching and whose
/// quotient is the union of two random spanning trees.
pub fn matching_composition(k: usize, seed: u64) -> Result<MultiGraph> {
    if k == 0 {
        return Err(Error::InvalidParameters("need at least one circuit".into()));
    }
    let mut r = rng(seed);
    let mut links = random_tree(&mut r, k);
    links.extend(random_tree(&mut r, k));
    let mut deg = vec![0usize; k];
    for &(a, b) in &links {
        deg[a] += 1;
        deg[b] += 1;
    }
    let mut pairs = Vec::new();
    let mut free: Vec<Vec<Vertex>> = Vec::with_capacity(k);
    let mut n = 0;
    for &d in &deg {
        let c = small_circuit(d.max(2), r.gen())?;
        place(&mut pairs, &c, n);
        let mut vs: Vec<Vertex> = (n..n + c.vertex_count()).collect();
        vs.shuffle(&mut r);
        free.push(vs);
        n += c.vertex_count();
    }
    for &(a, b) in &links {
        let u = free[a].pop().expect("enough vertices");
        let v = free[b].pop().expect("enough vertices");
        pairs.push((u, v));
    }
    let g = MultiGraph::from_edges(n, &pairs)?;
    ensure(is_two_tree(&g), "matching composition is 2T")?;
    ensure(disjoint_circuit_partition(&g)?.is_some(), "vertices split into circuits")?;
    Ok(g)
}

/// Path of `k` circuits joined by doubled links whose edges form a
/// matching: digons at the ends, K4s in the middle.
pub fn matching_chain(k: usize) -> Result<MultiGraph> {
    if k < 2 {
        return Err(Error::InvalidParameters("a chain needs at least two circuits".into()));
    }
    let mut pairs = Vec::new();
    let mut starts = Vec::new();
    let mut n = 0;
    for i in 0..k {
        let c = if i == 0 || i + 1 == k { digon() } else { k4() };
        place(&mut pairs, &c, n);
        starts.push(n);
        n += c.vertex_count();
    }
    for i in 0..k - 1 {
        // leave from the last two vertices of circuit i, enter at the first two of i + 1
        let out = if i == 0 { starts[0] } else { starts[i] + 2 };
        pairs.extend([(out, starts[i + 1]), (out + 1, starts[i + 1] + 1)]);
    }
    let g = MultiGraph::from_edges(n, &pairs)?;
    ensure(is_two_tree(&g), "matching chain is 2T")?;
    ensure(disjoint_circuit_partition(&g)?.is_some(), "vertices split into circuits")?;
    Ok(g)
}

/// A chain of `p + 1` circuits meeting the conflict conditions, completed to
/// a 2T-graph by two wheel hubs. `C_0` and `C_p` are digons, the middle
/// circuits are K4s.
pub fn conflict_gadget(p: usize) -> Result<MultiGraph> {
    if p == 0 {
        return Err(Error::InvalidParameters("a conflict needs at least one link".into()));
    }
    let mut pairs = Vec::new();
    let mut starts = Vec::new();
    let mut n = 0;
    for j in 0..=p {
        let c = if j == 0 || j == p { digon() } else { k4() };
        place(&mut pairs, &c, n);
        starts.push(n);
        n += c.vertex_count();
    }
    // C_0: x0 = start, y0 = start+1; C_p: z_p = start, xp = start+1;
    // middle C_j: z_j = start, y_j = start+1, extra = start+2.
    for j in 0..p {
        pairs.push((starts[j] + 1, starts[j + 1]));
    }
    let mut hub_targets: [Vec<Vertex>; 2] = [vec![starts[0], starts[0]], vec![starts[p] + 1, starts[p] + 1]];
    for j in 1..p {
        hub_targets[j % 2].push(starts[j] + 2);
    }
    let mut hubs = [0usize; 2];
    for (h, targets) in hub_targets.iter().enumerate() {
        let rim = (targets.len() + 1).max(3);
        hubs[h] = n;
        place(&mut pairs, &wheel(rim)?, n);
        for (i, &x) in targets.iter().enumerate() {
            pairs.push((x, n + 1 + i));
        }
        n += rim + 1;
    }
    pairs.push((hubs[0], hubs[1]));
    let g = MultiGraph::from_edges(n, &pairs)?;
    ensure(is_two_tree(&g), "conflict gadget is 2T")?;
    let atlas = CircuitAtlas::build(&g)?;
    let report = find_conflicts(&g, &atlas);
    ensure(report.conflicts.len() == 1 && report.conflicts[0].check(&g), "exactly one conflict")?;
    Ok(g)
}

/// Simple graph on `n` vertices with `i` adjacent to `i ± 1` and `i ± 2` (mod n).
pub fn squared_cycle(n: usize) -> Result<MultiGraph> {
    if n < 6 {
        return Err(Error::InvalidParameters("squared cycles need n >= 6 to be simple".into()));
    }
    let pairs: Vec<(Vertex, Vertex)> = (0..n).flat_map(|i| [(i, (i + 1) % n), (i, (i + 2) % n)]).collect();
    MultiGraph::from_edges(n, &pairs)
}

/// K_{2,2,2}: vertices `2i` and `2i+1` are the non-adjacent pairs.
pub fn octahedron() -> MultiGraph {
    let mut pairs = Vec::new();
    for a in 0..6 {
        for b in a + 1..6 {
            if a / 2 != b / 2 {
                pairs.push((a, b));
            }
        }
    }
    MultiGraph::from_edges(6, &pairs).expect("valid octahedron")
}

/// Union of two random spanning trees on `n` vertices.
pub fn random_two_tree(n: usize, seed: u64) -> Result<MultiGraph> {
    if n < 2 {
        return Err(Error::InvalidParameters("need at least two vertices".into()));
    }
    let mut r = rng(seed);
    let mut pairs = random_tree(&mut r, n);
    pairs.extend(random_tree(&mut r, n));
    let g = MultiGraph::from_edges(n, &pairs)?;
    ensure(is_two_tree(&g), "union of two spanning trees is 2T")?;
    Ok(g)
}
