//! Gadgets of the two hardness reductions and exhaustive solvers used to
//! check them on small instances.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{induced_subgraph, Digraph, MultiGraph, Vertex};
use crate::sparsity::is_generic_circuit;

/// Exact cover instance: elements `0..universe`, blocks of equal size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverInstance {
    pub universe: usize,
    pub blocks: Vec<Vec<usize>>,
}

impl CoverInstance {
    pub fn check(&self, size: usize) -> Result<()> {
        for (j, b) in self.blocks.iter().enumerate() {
            let mut sorted = b.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != size || b.len() != size {
                return Err(Error::InvalidParameters(format!("block {j} does not have {size} distinct elements")));
            }
            if let Some(&x) = b.iter().find(|&&x| x >= self.universe) {
                return Err(Error::InvalidParameters(format!("block {j} mentions element {x} outside the universe")));
            }
        }
        Ok(())
    }
}

/// Betweenness instance over elements `0..elements`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetweennessInstance {
    pub elements: usize,
    pub triples: Vec<[usize; 3]>,
}

impl BetweennessInstance {
    pub fn check(&self) -> Result<()> {
        for (i, &[x, y, z]) in self.triples.iter().enumerate() {
            if x == y || y == z || x == z {
                return Err(Error::InvalidParameters(format!("triple {i} repeats an element")));
            }
            if x.max(y).max(z) >= self.elements {
                return Err(Error::InvalidParameters(format!("triple {i} mentions an unknown element")));
            }
        }
        Ok(())
    }
}

/// Exact cover by 3-sets to exact cover by 4-sets: `q` new elements
/// `3q..4q`, and every block is extended by each of them.
pub fn x3c_to_x4c(inst: &CoverInstance) -> Result<CoverInstance> {
    inst.check(3)?;
    if inst.universe % 3 != 0 {
        return Err(Error::InvalidParameters(format!("universe size {} is not a multiple of 3", inst.universe)));
    }
    let q = inst.universe / 3;
    let mut blocks = Vec::with_capacity(inst.blocks.len() * q);
    for b in &inst.blocks {
        for i in 0..q {
            let mut nb = b.clone();
            nb.push(inst.universe + i);
            blocks.push(nb);
        }
    }
    Ok(CoverInstance { universe: inst.universe + q, blocks })
}

/// Element `k` is vertex `k`; block `j` owns vertices
/// `universe + 4j .. universe + 4j + 4`, which span a K4 and are each joined
/// twice to the corresponding element of the block.
pub fn x4c_to_circuit_partition_graph(inst: &CoverInstance) -> Result<MultiGraph> {
    inst.check(4)?;
    let base = inst.universe;
    let mut pairs = Vec::new();
    for (j, b) in inst.blocks.iter().enumerate() {
        let u = |k: usize| base + 4 * j + k;
        for a in 0..4 {
            for c in a + 1..4 {
                pairs.push((u(a), u(c)));
            }
        }
        for (k, &x) in b.iter().enumerate() {
            pairs.push((x, u(k)));
            pairs.push((x, u(k)));
        }
    }
    MultiGraph::from_edges(base + 4 * inst.blocks.len(), &pairs)
}

/// Digraph whose (s, t)-orderings correspond to betweenness orders. Returns
/// the digraph with `s` and `t`. Vertices: `s = 0`, `t = 1`, then one
/// vertex per element used by some triple (increasing element order), then
/// `d_i, e_i` for each triple.
pub fn betweenness_to_st_digraph(inst: &BetweennessInstance) -> Result<(Digraph, Vertex, Vertex)> {
    inst.check()?;
    let mut used = vec![false; inst.elements];
    for t in &inst.triples {
        t.iter().for_each(|&x| used[x] = true);
    }
    let mut index = vec![usize::MAX; inst.elements];
    let mut n = 2;
    for x in 0..inst.elements {
        if used[x] {
            index[x] = n;
            n += 1;
        }
    }
    let m = inst.triples.len();
    let mut d = Digraph::new(n + 2 * m);
    let (s, t) = (0, 1);
    let mut ends: Vec<Vertex> = inst.triples.iter().flat_map(|&[x, _, z]| [index[x], index[z]]).collect();
    ends.sort_unstable();
    ends.dedup();
    for &v in &ends {
        d.add_arc(s, v)?;
        d.add_arc(v, t)?;
    }
    for (i, &[x, y, z]) in inst.triples.iter().enumerate() {
        let (a, b, c) = (index[x], index[y], index[z]);
        let (di, ei) = (n + 2 * i, n + 2 * i + 1);
        for (p, q) in [(a, di), (c, di), (di, b), (b, ei), (ei, a), (ei, c)] {
            d.add_arc(p, q)?;
        }
    }
    if m == 0 {
        d.add_arc(s, t)?;
    }
    Ok((d, s, t))
}

/// Adds the arc `t -> s`.
pub fn strongify(d: &Digraph, s: Vertex, t: Vertex) -> Result<Digraph> {
    let mut out = d.clone();
    out.add_arc(t, s)?;
    Ok(out)
}

pub const COVER_BOUND: usize = 12;
pub const BETWEENNESS_BOUND: usize = 8;

/// Whether some blocks partition the universe.
pub fn brute_force_cover(inst: &CoverInstance) -> Result<bool> {
    if inst.universe > COVER_BOUND {
        return Err(Error::BoundExceeded { size: inst.universe, bound: COVER_BOUND });
    }
    if inst.blocks.iter().flatten().any(|&x| x >= inst.universe) {
        return Err(Error::InvalidParameters("block element outside the universe".into()));
    }
    let masks: Vec<u32> = inst
        .blocks
        .iter()
        .filter_map(|b| {
            let m = b.iter().fold(0u32, |m, &x| m | 1 << x);
            (m.count_ones() as usize == b.len()).then_some(m)
        })
        .collect();
    fn cover(covered: u32, full: u32, masks: &[u32]) -> bool {
        if covered == full {
            return true;
        }
        let first = (!covered & full).trailing_zeros();
        masks
            .iter()
            .filter(|&&m| m & 1 << first != 0 && m & covered == 0)
            .any(|&m| cover(covered | m, full, masks))
    }
    let full = if inst.universe == 32 { u32::MAX } else { (1u32 << inst.universe) - 1 };
    Ok(cover(0, full, &masks))
}

/// A total order of the elements satisfying every triple, if one exists.
pub fn brute_force_betweenness(inst: &BetweennessInstance) -> Result<Option<Vec<usize>>> {
    inst.check()?;
    if inst.elements > BETWEENNESS_BOUND {
        return Err(Error::BoundExceeded { size: inst.elements, bound: BETWEENNESS_BOUND });
    }
    fn extend(inst: &BetweennessInstance, pos: &mut [usize], order: &mut Vec<usize>) -> bool {
        if order.len() == inst.elements {
            return true;
        }
        for x in 0..inst.elements {
            if pos[x] != usize::MAX {
                continue;
            }
            pos[x] = order.len();
            order.push(x);
            // a triple with all three placed must have its middle in the middle
            let ok = inst.triples.iter().all(|&[a, b, c]| {
                let (pa, pb, pc) = (pos[a], pos[b], pos[c]);
                pa == usize::MAX || pb == usize::MAX || pc == usize::MAX || (pa < pb) == (pb < pc)
            });
            if ok && extend(inst, pos, order) {
                return true;
            }
            order.pop();
            pos[x] = usize::MAX;
        }
        false
    }
    let mut pos = vec![usize::MAX; inst.elements];
    let mut order = Vec::new();
    Ok(extend(inst, &mut pos, &mut order).then_some(order))
}

pub const PARTITION_BOUND: usize = 30;

/// Partition of the vertices into sets inducing generic circuits, by
/// exhaustive search over connected vertex sets.
pub fn brute_force_circuit_partition(g: &MultiGraph, bound: usize) -> Result<Option<Vec<Vec<Vertex>>>> {
    let n = g.vertex_count();
    let bound = bound.min(63);
    if n > bound {
        return Err(Error::BoundExceeded { size: n, bound });
    }
    let nbr: Vec<u64> = (0..n).map(|v| g.neighbours(v).iter().fold(0u64, |m, &w| m | 1 << w)).collect();
    let edges_within = |mask: u64| g.edges().iter().filter(|e| mask >> e.u & 1 == 1 && mask >> e.v & 1 == 1).count();
    // circuits[v]: masks of induced generic circuits whose smallest vertex is v
    let mut circuits: Vec<Vec<u64>> = vec![Vec::new(); n];
    for v in 0..n {
        let mut seen = HashSet::new();
        let mut stack = vec![1u64 << v];
        while let Some(mask) = stack.pop() {
            if !seen.insert(mask) {
                continue;
            }
            let size = mask.count_ones() as usize;
            if size >= 2 && edges_within(mask) + 2 >= 2 * size {
                let set: Vec<Vertex> = (0..n).filter(|&x| mask >> x & 1 == 1).collect();
                if is_generic_circuit(&induced_subgraph(g, &set)?) {
                    circuits[v].push(mask);
                }
                continue;
            }
            let mut frontier = (0..n).filter(|&x| mask >> x & 1 == 1).fold(0u64, |m, x| m | nbr[x]) & !mask;
            frontier &= !((1u64 << v) - 1);
            while frontier != 0 {
                let x = frontier.trailing_zeros();
                frontier &= frontier - 1;
                stack.push(mask | 1 << x);
            }
        }
    }
    fn search(covered: u64, full: u64, circuits: &[Vec<u64>], chosen: &mut Vec<u64>) -> bool {
        if covered == full {
            return true;
        }
        let v = (!covered & full).trailing_zeros() as usize;
        for &c in &circuits[v] {
            if c & covered == 0 {
                chosen.push(c);
                if search(covered | c, full, circuits, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut chosen = Vec::new();
    if n == 0 || !search(0, full, &circuits, &mut chosen) {
        return Ok(None);
    }
    Ok(Some(chosen.iter().map(|&c| (0..n).filter(|&x| c >> x & 1 == 1).collect()).collect()))
}
