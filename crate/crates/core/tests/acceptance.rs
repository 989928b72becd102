//! Acceptance run: one line per criterion, exit status 1 if any fails.
//! Run with `cargo test -p twotree-core --test acceptance`.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use twotree::atlas::all_generic_circuits;
use twotree::diagnostics::refute;
use twotree::generators::{self, rng};
use twotree::hardness::*;
use twotree::sparsity::{is_2t, is_generic_circuit, pebble_independent, TwoTreeVerdict};
use twotree::synthesis::*;
use twotree::verify::*;
use twotree::{orient_by_ordering, BranchKind, Digraph, MultiGraph, Vertex, VertexOrdering};

type Outcome = Result<String, String>;

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok { Ok(()) } else { Err(why()) }
}

fn random_multigraph(r: &mut impl Rng, n: usize, m: usize) -> MultiGraph {
    let mut pairs = Vec::with_capacity(m);
    while pairs.len() < m {
        let (u, v) = (r.gen_range(0..n), r.gen_range(0..n));
        if u != v {
            pairs.push((u, v));
        }
    }
    MultiGraph::from_edges(n, &pairs).unwrap()
}

/// Every vertex set X with |X| >= 2 spans at most k|X| - l edges.
fn sparse_by_subsets(g: &MultiGraph, k: usize, l: usize) -> bool {
    let n = g.vertex_count();
    (1u32..1 << n).filter(|m| m.count_ones() >= 2).all(|m| {
        let inside = g.edges().iter().filter(|e| m >> e.u & 1 == 1 && m >> e.v & 1 == 1).count();
        inside + l <= k * m.count_ones() as usize
    })
}

fn criterion_1() -> Outcome {
    let mut r = rng(1);
    for i in 0..200 {
        let n = r.gen_range(2..=8);
        let m = r.gen_range(0..=2 * n + 2);
        let g = random_multigraph(&mut r, n, m);
        for (k, l) in [(2, 2), (2, 3)] {
            let fast = pebble_independent(&g, k as u32, l as u32).map_err(|e| e.to_string())?.independent;
            ensure(fast == sparse_by_subsets(&g, k, l), || format!("graph {i} ({k},{l}): {:?}", g.edge_pairs()))?;
        }
    }
    Ok("200 graphs, both sparsity classes".into())
}

/// A 2T-graph with edges moved away from a minimum-degree vertex until it
/// has degree one; the edge count stays 2n - 2.
fn perturbed(seed: u64) -> MultiGraph {
    let mut r = rng(seed);
    let n = r.gen_range(4..=40);
    let g = generators::random_two_tree(n, seed).unwrap();
    let degrees = g.degrees();
    let v = (0..n).min_by_key(|&x| degrees[x]).unwrap();
    let mut pairs = g.edge_pairs();
    let mut at_v: Vec<usize> = (0..pairs.len()).filter(|&i| pairs[i].0 == v || pairs[i].1 == v).collect();
    at_v.shuffle(&mut r);
    for &i in &at_v[1..] {
        pairs[i] = loop {
            let (a, b) = (r.gen_range(0..n), r.gen_range(0..n));
            if a != b && a != v && b != v {
                break (a, b);
            }
        };
    }
    MultiGraph::from_edges(n, &pairs).unwrap()
}

fn criterion_2() -> Outcome {
    let mut r = rng(2);
    for seed in 0..200 {
        let g = generators::random_two_tree(r.gen_range(2..=40), seed).unwrap();
        match is_2t(&g).map_err(|e| e.to_string())? {
            TwoTreeVerdict::Certificate(c) => ensure(c.check(&g), || format!("bad certificate, seed {seed}"))?,
            other => return Err(format!("2T graph rejected, seed {seed}: {other:?}")),
        }
    }
    for seed in 0..50 {
        let g = perturbed(1000 + seed);
        match is_2t(&g).map_err(|e| e.to_string())? {
            TwoTreeVerdict::Partition(p) => ensure(p.check(&g), || format!("partition does not violate, seed {seed}"))?,
            other => return Err(format!("perturbed graph not refuted by a partition, seed {seed}: {other:?}")),
        }
    }
    Ok("200 certificates, 50 partitions".into())
}

/// Vertex sets X spanning exactly 2|X| - 2 edges with every proper subset
/// of size at least two spanning at most 2|Y| - 3.
fn minimal_tight_sets(g: &MultiGraph) -> BTreeSet<Vec<Vertex>> {
    let n = g.vertex_count();
    let span = |m: u32| g.edges().iter().filter(|e| m >> e.u & 1 == 1 && m >> e.v & 1 == 1).count();
    let mut found = BTreeSet::new();
    for m in 1u32..1 << n {
        let size = m.count_ones() as usize;
        if size < 2 || span(m) != 2 * size - 2 {
            continue;
        }
        let mut sub = (m - 1) & m;
        let mut minimal = true;
        while sub != 0 {
            let k = sub.count_ones() as usize;
            if k >= 2 && span(sub) + 3 > 2 * k {
                minimal = false;
                break;
            }
            sub = (sub - 1) & m;
        }
        if minimal {
            found.insert((0..n).filter(|&x| m >> x & 1 == 1).collect());
        }
    }
    found
}

fn fixtures() -> Vec<(String, MultiGraph)> {
    let mut out = vec![
        ("digon".to_string(), generators::digon()),
        ("k4".into(), generators::k4()),
        ("matched digons".into(), MultiGraph::from_edges(4, &[(0, 1), (0, 1), (2, 3), (2, 3), (0, 2), (1, 3)]).unwrap()),
        (
            "2-sum of two K4".into(),
            MultiGraph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)])
                .unwrap(),
        ),
        ("obstacle star".into(), generators::obstacle_star().unwrap()),
        ("matching chain".into(), generators::matching_chain(3).unwrap()),
    ];
    for k in 1..=4 {
        out.push((format!("digon path {k}"), generators::digon_path(k).unwrap()));
    }
    for k in 3..=7 {
        out.push((format!("wheel {k}"), generators::wheel(k).unwrap()));
    }
    for n in 5..=8 {
        out.push((format!("henneberg {n}"), generators::henneberg_circuit(n, n as u64).unwrap()));
    }
    for seed in 0..30 {
        let g = generators::random_double_tree(2 + seed as usize % 3, seed % 2 == 0, seed).unwrap();
        if g.vertex_count() <= 8 {
            out.push((format!("double tree {seed}"), g));
        }
        let g = generators::random_two_tree(3 + seed as usize % 6, seed).unwrap();
        out.push((format!("two trees {seed}"), g));
    }
    out
}

fn criterion_3() -> Outcome {
    let all = fixtures();
    for (name, g) in &all {
        let fast: BTreeSet<Vec<Vertex>> = all_generic_circuits(g).map_err(|e| format!("{name}: {e}"))?.into_iter().collect();
        ensure(fast == minimal_tight_sets(g), || format!("{name}: {fast:?}"))?;
    }
    Ok(format!("{} fixtures", all.len()))
}

fn criterion_4() -> Outcome {
    let mut r = rng(4);
    let mut built = 0;
    let mut seed = 0;
    while built < 100 {
        seed += 1;
        let g = if built % 2 == 0 {
            generators::henneberg_circuit(r.gen_range(4..=50), seed)
        } else {
            generators::two_sum_chain(r.gen_range(1..=12), seed)
        }
        .map_err(|e| e.to_string())?;
        if g.vertex_count() < 4 || g.vertex_count() > 50 {
            continue;
        }
        built += 1;
        let n = g.vertex_count();
        for side in [BranchKind::Out, BranchKind::In] {
            let mut specs = 0;
            while specs < 5 {
                let e = &g.edges()[r.gen_range(0..g.edge_count())];
                let spec = RootSpec { s: r.gen_range(0..n), t: r.gen_range(0..n), e: e.id, side };
                if spec.check(&g).is_err() {
                    continue;
                }
                specs += 1;
                let res = circuit_good_ordering(&g, spec).map_err(|e| format!("seed {seed} {spec:?}: {e}"))?;
                ensure(check_ordering(&g, &res.ordering).map_err(|e| e.to_string())?.is_good(), || {
                    format!("seed {seed}: ordering is not good")
                })?;
                verify_pair(&g, &res.ordering, &res.pair).map_err(|why| format!("seed {seed}: {why}"))?;
                let arcs = match side {
                    BranchKind::Out => &res.pair.out.arcs,
                    BranchKind::In => &res.pair.inn.arcs,
                };
                ensure(res.pair.s() == spec.s && res.pair.t() == spec.t && arcs.contains(&spec.e), || {
                    format!("seed {seed}: prescribed roots or edge side not honoured")
                })?;
            }
        }
    }
    Ok("100 circuits, 10 specs each".into())
}

fn criterion_5() -> Outcome {
    for seed in 0..50 {
        let g = generators::matching_composition(2 + seed as usize % 7, seed).map_err(|e| e.to_string())?;
        let res = matching_good_ordering(&g).map_err(|e| format!("seed {seed}: {e}"))?;
        res.verify(&g).map_err(|why| format!("seed {seed}: {why}"))?;
    }
    Ok("50 instances".into())
}

fn star(links: [[(usize, usize); 2]; 3]) -> MultiGraph {
    let mut pairs = vec![(0, 1), (0, 1), (2, 3), (2, 3), (4, 5), (4, 5), (6, 7), (6, 7)];
    pairs.extend(links.iter().flatten());
    MultiGraph::from_edges(8, &pairs).unwrap()
}

fn double_tree_instances() -> Vec<(String, MultiGraph)> {
    let mut out = vec![
        ("obstacle star".to_string(), generators::obstacle_star().unwrap()),
        ("3-pendant star".into(), star([[(0, 2), (1, 3)], [(0, 4), (1, 5)], [(0, 6), (1, 7)]])),
        ("3-pendant star, degenerate".into(), star([[(0, 2), (0, 3)], [(1, 4), (1, 5)], [(0, 6), (1, 7)]])),
        ("3-pendant star, mixed".into(), star([[(0, 2), (1, 2)], [(0, 4), (1, 5)], [(1, 6), (0, 7)]])),
    ];
    for k in 1..=4 {
        out.push((format!("digon path {k}"), generators::digon_path(k).unwrap()));
    }
    for seed in 0..600 {
        let g = generators::random_double_tree(2 + seed as usize % 3, seed % 2 == 0, seed).unwrap();
        if g.vertex_count() <= 9 {
            out.push((format!("random {seed}"), g));
        }
    }
    out
}

fn criteria_6_and_7() -> (Outcome, Outcome) {
    let instances = double_tree_instances();
    let (mut fired, mut agree) = (0, Ok(()));
    let mut sound = Ok(());
    for (name, g) in &instances {
        let exists = match brute_force_good_ordering(g, 9) {
            Ok(x) => x.is_some(),
            Err(e) => return (Err(format!("{name}: {e}")), Err("not run".into())),
        };
        match double_tree_good_ordering(g) {
            Ok(out) if matches!(out, DoubleTreeOutcome::Good(_)) != exists && agree.is_ok() => {
                agree = Err(format!("{name}: verdict {} but brute force says {exists}", out.result().is_some()));
            }
            Err(e) if agree.is_ok() => agree = Err(format!("{name}: {e}")),
            _ => {}
        }
        match refute(g) {
            Ok(Some(r)) => {
                fired += 1;
                if (exists || !r.recheck(g)) && sound.is_ok() {
                    sound = Err(format!("{name}: {} refutation on a graph with a good ordering", r.kind()));
                }
            }
            Ok(None) => {}
            Err(e) if sound.is_ok() => sound = Err(format!("{name}: {e}")),
            Err(_) => {}
        }
    }
    let count = instances.len();
    let agree = agree.and_then(|()| {
        ensure(count >= 100, || format!("only {count} instances"))?;
        Ok(format!("{count} instances"))
    });
    (agree, sound.map(|()| format!("{fired} refutations")))
}

fn criterion_8() -> Outcome {
    let mut pairs = 0;
    for (name, g) in [("octahedron", generators::octahedron()), ("C6 squared", generators::squared_cycle(6).unwrap())] {
        for e in g.edges() {
            for f in g.edges() {
                if e.id >= f.id || e.touches(f.u) || e.touches(f.v) {
                    continue;
                }
                pairs += 1;
                ensure(is_generic_circuit(&g.without_edges(&[e.id, f.id])), || {
                    format!("{name}: removing {} and {} leaves no circuit", e.id, f.id)
                })?;
                let h = four_regular_spanning_circuit(&g, e.id, f.id).map_err(|x| format!("{name}: {x}"))?;
                ensure(h.vertex_count() == 6, || format!("{name}: circuit is not spanning"))?;
            }
        }
        let res = spanning_circuit_good_ordering(&g).map_err(|x| format!("{name}: {x}"))?;
        res.verify(&g).map_err(|why| format!("{name}: {why}"))?;
    }
    Ok(format!("{pairs} disjoint pairs"))
}

fn random_cover(r: &mut impl Rng) -> CoverInstance {
    let universe = if r.gen_bool(0.5) { 4 } else { 8 };
    let count = r.gen_range(1..=if universe == 4 { 6 } else { 5 });
    let mut blocks = Vec::new();
    if universe == 8 && r.gen_bool(0.5) {
        // plant a solution half of the time
        let mut all: Vec<usize> = (0..8).collect();
        all.shuffle(r);
        blocks.push(all[..4].to_vec());
        blocks.push(all[4..].to_vec());
    }
    while blocks.len() < count.max(blocks.len()) {
        let mut all: Vec<usize> = (0..universe).collect();
        all.shuffle(r);
        blocks.push(all[..4].to_vec());
    }
    blocks.shuffle(r);
    CoverInstance { universe, blocks }
}

fn has_st_ordering(d: &Digraph, s: Vertex, t: Vertex) -> Result<bool, String> {
    brute_force_st_ordering(d, s, t, DEFAULT_ST_BOUND).map(|o| o.is_some()).map_err(|e| e.to_string())
}

fn criterion_9() -> Outcome {
    let mut r = rng(9);
    let (mut yes, mut strong_extra) = (0, Vec::new());
    for i in 0..50 {
        let inst = random_cover(&mut r);
        let g = x4c_to_circuit_partition_graph(&inst).map_err(|e| e.to_string())?;
        let gadget = brute_force_circuit_partition(&g, PARTITION_BOUND).map_err(|e| e.to_string())?.is_some();
        let direct = brute_force_cover(&inst).map_err(|e| e.to_string())?;
        ensure(gadget == direct, || format!("cover {i}: gadget {gadget}, direct {direct}: {inst:?}"))?;
        yes += usize::from(direct);
    }
    for i in 0..30 {
        let elements = r.gen_range(3..=BETWEENNESS_BOUND);
        let triples = (0..r.gen_range(0..=4))
            .map(|_| {
                let mut all: Vec<usize> = (0..elements).collect();
                all.shuffle(&mut r);
                [all[0], all[1], all[2]]
            })
            .collect();
        let inst = BetweennessInstance { elements, triples };
        let (d, s, t) = betweenness_to_st_digraph(&inst).map_err(|e| e.to_string())?;
        let direct = brute_force_betweenness(&inst).map_err(|e| e.to_string())?.is_some();
        let gadget = has_st_ordering(&d, s, t)?;
        ensure(gadget == direct, || format!("betweenness {i}: gadget {gadget}, direct {direct}: {inst:?}"))?;
        let strong = strongify(&d, s, t).map_err(|e| e.to_string())?;
        ensure(has_st_ordering(&strong, s, t)? == direct, || format!("betweenness {i}: strongified answer changed"))?;
        let n = strong.vertex_count();
        for p in 0..n {
            for q in 0..n {
                if p != q && (p, q) != (s, t) && has_st_ordering(&strong, p, q)? {
                    strong_extra.push((i, p, q));
                }
            }
        }
    }
    ensure(strong_extra.is_empty(), || {
        format!("strongified gadgets admit orderings at pairs other than (s, t), e.g. instance/pair {:?}", strong_extra[0])
    })?;
    Ok(format!("50 cover instances ({yes} solvable), 30 betweenness instances"))
}

/// Whether some choice of one entering arc per non-source vertex leaves
/// every non-sink vertex an unused leaving arc. In an acyclic digraph with
/// one source and one sink these choices are exactly the arc-disjoint
/// branching pairs.
fn exhaustive_pair(d: &Digraph) -> bool {
    let n = d.vertex_count();
    let (ins, outs) = (d.in_degrees(), d.out_degrees());
    let sources: Vec<Vertex> = (0..n).filter(|&v| ins[v] == 0).collect();
    let sinks: Vec<Vertex> = (0..n).filter(|&v| outs[v] == 0).collect();
    if n < 2 || sources.len() != 1 || sinks.len() != 1 {
        return false;
    }
    let in_arcs = d.in_arcs();
    let mut free = outs.clone();
    fn pick(v: usize, d: &Digraph, in_arcs: &[Vec<usize>], s: usize, t: usize, free: &mut [usize]) -> bool {
        if v == d.vertex_count() {
            return (0..free.len()).all(|u| u == t || free[u] >= 1);
        }
        if v == s {
            return pick(v + 1, d, in_arcs, s, t, free);
        }
        for &a in &in_arcs[v] {
            let tail = d.arc(a).unwrap().tail;
            let need = usize::from(tail != t);
            if free[tail] > need {
                free[tail] -= 1;
                if pick(v + 1, d, in_arcs, s, t, free) {
                    return true;
                }
                free[tail] += 1;
            }
        }
        false
    }
    pick(0, d, &in_arcs, sources[0], sinks[0], &mut free)
}

fn criterion_10() -> Outcome {
    let mut r = rng(10);
    let (mut bad, mut good) = (0, 0);
    for i in 0..400 {
        let n = r.gen_range(2..=8);
        let g = if i % 2 == 0 {
            generators::random_two_tree(n, i).map_err(|e| e.to_string())?
        } else {
            let m = r.gen_range(n - 1..=2 * n);
            random_multigraph(&mut r, n, m)
        };
        let mut order: Vec<Vertex> = (0..n).collect();
        order.shuffle(&mut r);
        let ord = VertexOrdering::new(order, n).map_err(|e| e.to_string())?;
        let d = orient_by_ordering(&g, &ord).map_err(|e| e.to_string())?;
        let verdict = check_ordering(&g, &ord).map_err(|e| e.to_string())?;
        ensure(verdict.is_good() == exhaustive_pair(&d), || format!("case {i}: verdict disagrees with exhaustive search"))?;
        match verdict {
            OrderingVerdict::Good(pair) => {
                good += 1;
                verify_pair(&g, &ord, &pair).map_err(|why| format!("case {i}: {why}"))?;
            }
            OrderingVerdict::Bad(BadOrdering::Violator(v)) => {
                bad += 1;
                ensure(v.check(&d, ord.first().unwrap()), || format!("case {i}: violator does not recompute"))?;
            }
            OrderingVerdict::Bad(BadOrdering::Structural(_)) => {}
        }
    }
    Ok(format!("400 orientations, {good} good, {bad} violator sets"))
}

fn report(number: &str, budget: Duration, start: Instant, outcome: Outcome) -> bool {
    let took = start.elapsed();
    let outcome = outcome.and_then(|detail| {
        ensure(took <= budget, || format!("took {took:?}, budget {budget:?}"))?;
        Ok(detail)
    });
    match &outcome {
        Ok(detail) => println!("criterion {number}: PASS ({detail}; {:.2}s)", took.as_secs_f64()),
        Err(why) => println!("criterion {number}: FAIL ({why})"),
    }
    outcome.is_ok()
}

fn main() {
    let secs = Duration::from_secs;
    let mut ok = true;
    let runs: [(&str, u64, fn() -> Outcome); 5] =
        [("1", 60, criterion_1), ("2", 60, criterion_2), ("3", 120, criterion_3), ("4", 120, criterion_4), ("5", 60, criterion_5)];
    for (number, budget, run) in runs {
        let start = Instant::now();
        ok &= report(number, secs(budget), start, run());
    }
    let start = Instant::now();
    let (six, seven) = criteria_6_and_7();
    ok &= report("6", secs(600), start, six);
    ok &= report("7", secs(600), start, seven);
    let runs: [(&str, u64, fn() -> Outcome); 3] = [("8", 30, criterion_8), ("9", 120, criterion_9), ("10", 60, criterion_10)];
    for (number, budget, run) in runs {
        let start = Instant::now();
        ok &= report(number, secs(budget), start, run());
    }
    if !ok {
        std::process::exit(1);
    }
}
