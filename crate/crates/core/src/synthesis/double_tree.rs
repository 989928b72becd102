use super::matching::{circuit_on, insert_after, positions};
use super::{certify, GoodOrderingResult, Raw};
use crate::atlas::CircuitAtlas;
use crate::diagnostics::{end_in, find_obstacles, pendant_sets, DoubleTree, Refutation};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph, Vertex};
use crate::sparsity::is_2t;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DoubleTreeOutcome {
    Good(GoodOrderingResult),
    Refuted(Refutation),
}

impl DoubleTreeOutcome {
    pub fn result(&self) -> Option<&GoodOrderingResult> {
        match self {
            DoubleTreeOutcome::Good(r) => Some(r),
            DoubleTreeOutcome::Refuted(_) => None,
        }
    }
}

/// Decides a 2T-graph whose components are circuits and whose quotient is
/// a tree with every edge doubled: a certified ordering or a refutation.
pub fn double_tree_good_ordering(g: &MultiGraph) -> Result<DoubleTreeOutcome> {
    if !is_2t(g)?.is_2t() {
        return Err(Error::WrongShape("graph is not 2T".into()));
    }
    let atlas = CircuitAtlas::build(g)?;
    let tree = DoubleTree::of(&atlas)
        .ok_or_else(|| Error::WrongShape("components are not circuits forming a double tree".into()))?;
    if let Some(obstacle) = find_obstacles(g, &atlas)?.into_iter().next() {
        return Ok(DoubleTreeOutcome::Refuted(Refutation::Obstacle { obstacle }));
    }
    let builder = Builder { g, atlas: &atlas, tree: &tree };
    let Some(spine) = builder.spine() else {
        let sets = pendant_sets(g);
        if sets.len() < 3 {
            return Err(Error::InvariantViolation("degenerate links off a path without three pendant sets".into()));
        }
        return Ok(DoubleTreeOutcome::Refuted(Refutation::ThreePendantSets { sets: sets[..3].to_vec() }));
    };
    let raw = builder.along(&spine)?;
    Ok(DoubleTreeOutcome::Good(certify(g, raw.into_result(g.vertex_count())?, None)?))
}

struct Builder<'a> {
    g: &'a MultiGraph,
    atlas: &'a CircuitAtlas,
    tree: &'a DoubleTree,
}

impl Builder<'_> {
    fn end(&self, id: EdgeId, node: usize) -> Vertex {
        end_in(self.g, self.atlas, id, node)
    }

    /// Both edges of a link meet in one vertex on at least one side.
    fn degenerate(&self, a: usize, b: usize, link: [EdgeId; 2]) -> bool {
        self.end(link[0], a) == self.end(link[1], a) || self.end(link[0], b) == self.end(link[1], b)
    }

    /// Shortest node path carrying every degenerate link, or `None` when no
    /// path carries them all.
    fn spine(&self) -> Option<Vec<usize>> {
        let k = self.tree.node_count();
        let mut terminal = vec![false; k];
        for a in 0..k {
            for &(b, link) in &self.tree.adj[a] {
                if self.degenerate(a, b, link) {
                    terminal[a] = true;
                    terminal[b] = true;
                }
            }
        }
        if !terminal.iter().any(|&x| x) {
            return Some(vec![0]);
        }
        let mut alive = vec![true; k];
        let mut deg: Vec<usize> = self.tree.adj.iter().map(Vec::len).collect();
        let mut stack: Vec<usize> = (0..k).filter(|&a| deg[a] <= 1 && !terminal[a]).collect();
        while let Some(a) = stack.pop() {
            if !alive[a] {
                continue;
            }
            alive[a] = false;
            for &(b, _) in &self.tree.adj[a] {
                if alive[b] {
                    deg[b] -= 1;
                    if deg[b] <= 1 && !terminal[b] {
                        stack.push(b);
                    }
                }
            }
        }
        if (0..k).any(|a| alive[a] && deg[a] > 2) {
            return None;
        }
        let start = (0..k).find(|&a| alive[a] && deg[a] <= 1).expect("a finite path has an end");
        let mut path = vec![start];
        let mut prev = usize::MAX;
        loop {
            let cur = *path.last().expect("nonempty");
            let next = self.tree.adj[cur].iter().map(|&(b, _)| b).find(|&b| alive[b] && b != prev);
            match next {
                Some(b) => {
                    prev = cur;
                    path.push(b);
                }
                None => break,
            }
        }
        Some(path)
    }

    fn along(&self, spine: &[usize]) -> Result<Raw> {
        let p = spine.len() - 1;
        let links: Vec<[EdgeId; 2]> = (1..=p).map(|i| self.tree.link(spine[i - 1], spine[i])).collect();
        // choice[i] is the index of the out-branching edge of link i
        let enter = |i: usize, x: usize| self.end(links[i - 1][x], spine[i]);
        let leave = |i: usize, x: usize| self.end(links[i][1 - x], spine[i]);
        let mut ok = vec![[true, true]; p + 1];
        let mut from = vec![[0usize; 2]; p + 1];
        for i in 1..p {
            for y in 0..2 {
                ok[i + 1][y] = false;
                for x in 0..2 {
                    if ok[i][x] && enter(i, x) != leave(i, y) {
                        ok[i + 1][y] = true;
                        from[i + 1][y] = x;
                        break;
                    }
                }
            }
        }
        let mut choice = vec![0usize; p + 1];
        if p >= 1 {
            choice[p] = (0..2).find(|&x| ok[p][x]).ok_or_else(|| {
                Error::InvariantViolation("no consistent root choice along the spine, yet no obstacle".into())
            })?;
            for i in (2..=p).rev() {
                choice[i - 1] = from[i][choice[i]];
            }
        }
        let mut order = Vec::with_capacity(self.g.vertex_count());
        let mut out = std::collections::BTreeSet::new();
        let mut inn = std::collections::BTreeSet::new();
        for (i, &node) in spine.iter().enumerate() {
            let s = (i > 0).then(|| enter(i, choice[i]));
            let t = (i < p).then(|| leave(i, choice[i + 1]));
            let (s, t) = self.roots(node, s, t)?;
            let prev = if i > 0 { Some(spine[i - 1]) } else { None };
            let next = spine.get(i + 1).copied();
            let block = self.block(node, s, t, &|b| Some(b) == prev || Some(b) == next)?;
            order.extend(block.order);
            out.extend(block.out);
            inn.extend(block.inn);
            if i > 0 {
                let x = choice[i];
                out.insert(links[i - 1][x]);
                inn.insert(links[i - 1][1 - x]);
            }
        }
        Ok(Raw { order, out, inn })
    }

    /// Completes partially prescribed roots of a circuit.
    fn roots(&self, node: usize, s: Option<Vertex>, t: Option<Vertex>) -> Result<(Vertex, Vertex)> {
        let vs = &self.atlas.components[node].vertices;
        let other = |x: Vertex| vs.iter().copied().find(|&v| v != x).expect("circuits have two vertices");
        Ok(match (s, t) {
            (Some(s), Some(t)) if s != t => (s, t),
            (Some(_), Some(_)) => return Err(Error::InvariantViolation("spine circuit with equal roots".into())),
            (Some(s), None) => (s, other(s)),
            (None, Some(t)) => (other(t), t),
            (None, None) => (vs[0], other(vs[0])),
        })
    }

    /// Ordering of the circuit `node` from `s` to `t` with every subtree not
    /// excluded by `skip` inserted as a block.
    fn block(&self, node: usize, s: Vertex, t: Vertex, skip: &dyn Fn(usize) -> bool) -> Result<Raw> {
        let mut raw = circuit_on(self.g, &self.atlas.components[node].vertices, s, t)?;
        for &(child, link) in &self.tree.adj[node] {
            if skip(child) {
                continue;
            }
            let pos = positions(&raw.order, self.g.vertex_count());
            let (p0, p1) = (self.end(link[0], node), self.end(link[1], node));
            let (plus, minus) = if pos[p0] < pos[p1] { (link[0], link[1]) } else { (link[1], link[0]) };
            let (cs, ct) = (self.end(plus, child), self.end(minus, child));
            if p0 == p1 || cs == ct {
                return Err(Error::InvariantViolation("degenerate link off the spine".into()));
            }
            let sub = self.block(child, cs, ct, &|b| b == node)?;
            let at = self.end(plus, node);
            raw = insert_after(raw, sub, at, &pos);
            raw.out.insert(plus);
            raw.inn.insert(minus);
        }
        Ok(raw)
    }
}
