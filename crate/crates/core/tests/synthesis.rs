use rand::Rng;
use twotree::generators::{self, rng};
use twotree::synthesis::{
    circuit_good_ordering, double_tree_good_ordering, matching_good_ordering, DoubleTreeOutcome, RootSpec,
};
use twotree::verify::{brute_force_good_ordering, check_ordering};
use twotree::{BranchKind, MultiGraph};

fn random_spec(g: &MultiGraph, r: &mut impl Rng, side: BranchKind) -> RootSpec {
    let n = g.vertex_count();
    loop {
        let e = &g.edges()[r.gen_range(0..g.edge_count())];
        let (s, t) = if r.gen_bool(0.5) {
            (e.u, r.gen_range(0..n))
        } else {
            (r.gen_range(0..n), e.v)
        };
        if s != t {
            return RootSpec { s, t, e: e.id, side };
        }
    }
}

fn assert_circuit_specs(g: &MultiGraph, seed: u64, rounds: usize) {
    let mut r = rng(seed);
    for _ in 0..rounds {
        for side in [BranchKind::Out, BranchKind::In] {
            let spec = random_spec(g, &mut r, side);
            let res = circuit_good_ordering(g, spec).unwrap_or_else(|e| panic!("{spec:?}: {e}"));
            assert!(check_ordering(g, &res.ordering).unwrap().is_good());
        }
    }
}

#[test]
fn henneberg_circuits_take_any_spec() {
    for seed in 0..30 {
        let g = generators::henneberg_circuit(5 + (seed as usize % 20), seed).unwrap();
        assert_circuit_specs(&g, seed, 4);
    }
}

#[test]
fn two_sum_chains_take_any_spec() {
    for seed in 0..30 {
        let g = generators::two_sum_chain(2 + (seed as usize % 5), seed).unwrap();
        assert_circuit_specs(&g, seed, 4);
    }
}

#[test]
fn matching_compositions_are_good() {
    for seed in 0..40 {
        let g = generators::matching_composition(2 + (seed as usize % 7), seed).unwrap();
        let res = matching_good_ordering(&g).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert!(res.verify(&g).is_ok());
    }
}

#[test]
fn double_trees_agree_with_brute_force() {
    let (mut good, mut refuted) = (0, 0);
    for seed in 0..400 {
        let k = 2 + (seed as usize % 3);
        let g = generators::random_double_tree(k, seed % 2 == 0, seed).unwrap();
        if g.vertex_count() > 9 {
            continue;
        }
        let exists = brute_force_good_ordering(&g, 9).unwrap().is_some();
        let out = double_tree_good_ordering(&g).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert_eq!(matches!(out, DoubleTreeOutcome::Good(_)), exists, "seed {seed}: {:?}", g.edge_pairs());
        if exists { good += 1 } else { refuted += 1 }
    }
    assert!(good >= 50 && refuted >= 20, "good {good}, refuted {refuted}");
}

use std::collections::BTreeSet;
use twotree::sparsity::is_generic_circuit;
use twotree::synthesis::*;
use twotree::verify::verify_pair;

#[test]
fn henneberg_moves_on_w4() {
    let w4 = generators::wheel(4).unwrap();
    let mv = henneberg_move(&w4, 1, (2, 4)).unwrap();
    assert_eq!(mv.class, MoveClass::Feasible);
    assert_eq!(mv.reduced.graph.vertex_count(), 4);
    assert_eq!(henneberg_move(&w4, 1, (2, 0)).unwrap().class, MoveClass::Inadmissible);
    assert!(henneberg_move(&w4, 0, (1, 2)).is_err());

    let k4 = generators::k4();
    assert_eq!(henneberg_move(&k4, 0, (1, 2)).unwrap().class, MoveClass::Inadmissible);

    let moves = find_admissible_moves(&w4).unwrap();
    let zs: BTreeSet<usize> = moves.iter().filter(|m| m.class == MoveClass::Feasible).map(|m| m.z).collect();
    assert_eq!(zs, BTreeSet::from([1, 2, 3, 4]));
    assert!(find_admissible_moves(&k4).is_err());
    let w5 = generators::wheel(5).unwrap();
    for m in find_admissible_moves(&w5).unwrap() {
        assert!(is_generic_circuit(&m.reduced.graph));
    }
}

#[test]
fn lifting_from_k4() {
    let w4 = generators::wheel(4).unwrap();
    let mv = henneberg_move(&w4, 1, (2, 4)).unwrap();
    let sub = &mv.reduced.graph;
    let e = sub.edges()[0].clone();
    for (s, t) in [(e.u, e.v), (e.v, e.u)] {
        let base = circuit_good_ordering(sub, RootSpec { s, t, e: e.id, side: twotree::BranchKind::Out }).unwrap();
        let lifted = lift_ordering(&w4, &mv, &base).unwrap();
        assert!(check_ordering(&w4, &lifted.ordering).unwrap().is_good());
        // the reversed input exercises the mirrored cases
        let lifted = lift_ordering(&w4, &mv, &base.reversed()).unwrap();
        assert!(lifted.verify(&w4).is_ok());
    }

    // three lifts from K4 along random admissible extensions
    let g = generators::henneberg_circuit(7, 3).unwrap();
    let mut chain = vec![g.clone()];
    let mut moves = Vec::new();
    while chain.last().unwrap().vertex_count() > 4 {
        let cur = chain.last().unwrap();
        let mv = find_admissible_moves(cur).unwrap().into_iter().next().unwrap();
        chain.push(mv.reduced.graph.clone());
        moves.push(mv);
    }
    let base = chain.last().unwrap();
    let e = &base.edges()[0];
    let mut res = circuit_good_ordering(base, RootSpec { s: e.u, t: e.v, e: e.id, side: twotree::BranchKind::In }).unwrap();
    for (mv, g) in moves.iter().zip(chain.iter()).rev() {
        res = lift_ordering(g, mv, &res).unwrap();
    }
    assert!(verify_pair(&g, &res.ordering, &res.pair).is_ok());
}

fn two_k4_sum() -> MultiGraph {
    // K4 on {0,1,x=2,y=3} minus xy, K4 on {x,y,4,5} minus xy
    MultiGraph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)]).unwrap()
}

#[test]
fn two_separation_examples() {
    let h = two_k4_sum();
    assert!(is_generic_circuit(&h));
    assert_eq!(find_two_cut(&h), Some((2, 3)));
    let sep = two_separation(&h, 2, 3).unwrap();
    for p in &sep.parts {
        assert_eq!(p.graph.vertex_count(), 4);
        assert!(is_generic_circuit(&p.graph));
        assert!(p.graph.has_edge(sep.virtual_edge));
    }
    let k4 = generators::k4();
    assert!(two_separation(&k4, 0, 1).is_err());
    assert!(find_two_cut(&k4).is_none());

    let chain = generators::two_sum(&h, 0, &generators::k4(), 5).unwrap();
    assert_eq!(chain.vertex_count(), 8);
    assert!(is_generic_circuit(&chain));
    let (a, b) = find_two_cut(&chain).unwrap();
    let sep = two_separation(&chain, a, b).unwrap();
    let mut sizes: Vec<usize> = sep.parts.iter().map(|p| p.graph.vertex_count()).collect();
    sizes.sort_unstable();
    assert_eq!(sizes, vec![4, 6]);
}

#[test]
fn circuit_ordering_examples() {
    let k4 = generators::k4();
    let res = circuit_good_ordering(&k4, RootSpec { s: 0, t: 3, e: 2, side: twotree::BranchKind::Out }).unwrap();
    assert_eq!(res.ordering.as_slice(), &[0, 1, 2, 3]);
    assert!(res.pair.out.arcs.contains(&2));

    let digon = generators::digon();
    let res = circuit_good_ordering(&digon, RootSpec { s: 0, t: 1, e: 0, side: twotree::BranchKind::In }).unwrap();
    assert_eq!(res.pair.inn.arcs, BTreeSet::from([0]));
    assert_eq!(res.pair.out.arcs, BTreeSet::from([1]));

    let h = two_k4_sum();
    for side in [twotree::BranchKind::Out, twotree::BranchKind::In] {
        for s in [0, 1] {
            for t in [4, 5] {
                for e in h.edges().iter().filter(|e| e.touches(s)) {
                    let spec = RootSpec { s, t, e: e.id, side };
                    let res = circuit_good_ordering(&h, spec).unwrap();
                    assert!(check_ordering(&h, &res.ordering).unwrap().is_good());
                    // reversal duality
                    let rev = res.reversed();
                    assert!(rev.verify(&h).is_ok());
                }
            }
        }
    }
    assert!(circuit_good_ordering(&k4, RootSpec { s: 1, t: 2, e: 2, side: twotree::BranchKind::Out }).is_err());
}

#[test]
fn matching_examples() {
    let g = MultiGraph::from_edges(4, &[(0, 1), (0, 1), (2, 3), (2, 3), (0, 2), (1, 3)]).unwrap();
    let res = matching_good_ordering(&g).unwrap();
    assert!(res.verify(&g).is_ok());
    let chain = generators::matching_chain(5).unwrap();
    assert!(matching_good_ordering(&chain).unwrap().verify(&chain).is_ok());
    assert!(matching_good_ordering(&generators::digon_path(3).unwrap()).is_err());
    // three K4s joined by four matching edges: quotient is a triangle with one doubled side
    let mut pairs = Vec::new();
    for c in 0..3 {
        let b = 4 * c;
        for a in 0..4 {
            for d in a + 1..4 {
                pairs.push((b + a, b + d));
            }
        }
    }
    pairs.extend([(0, 4), (1, 5), (6, 8), (9, 2)]);
    let g = MultiGraph::from_edges(12, &pairs).unwrap();
    assert!(matching_good_ordering(&g).unwrap().verify(&g).is_ok());
    // two external edges at one vertex
    let star = generators::obstacle_star().unwrap();
    assert!(matching_good_ordering(&star).is_err());
}

#[test]
fn double_tree_examples() {
    let path = generators::digon_path(3).unwrap();
    assert!(double_tree_good_ordering(&path).unwrap().result().is_some());
    let star = generators::obstacle_star().unwrap();
    match double_tree_good_ordering(&star).unwrap() {
        DoubleTreeOutcome::Refuted(r) => assert_eq!(r.kind(), "obstacle"),
        DoubleTreeOutcome::Good(_) => panic!("obstacle star has no good ordering"),
    }
    // end digons attached through distinct vertices
    let g = MultiGraph::from_edges(6, &[(0, 1), (0, 1), (2, 3), (2, 3), (4, 5), (4, 5), (0, 2), (1, 2), (3, 4), (3, 5)])
        .unwrap();
    let res = double_tree_good_ordering(&g).unwrap();
    assert!(res.result().unwrap().verify(&g).is_ok());
    assert!(double_tree_good_ordering(&generators::matching_composition(4, 1).unwrap()).is_err());
}

#[test]
fn spanning_circuit_examples() {
    let mut w4 = generators::wheel(4).unwrap();
    w4.add_edge(1, 3).unwrap();
    assert!(spanning_circuit_good_ordering(&w4).unwrap().verify(&w4).is_ok());
    let k4 = generators::k4();
    assert!(spanning_circuit_good_ordering(&k4).unwrap().verify(&k4).is_ok());

    let oct = generators::octahedron();
    let c62 = generators::squared_cycle(6).unwrap();
    for g in [&oct, &c62] {
        for e in g.edges() {
            for f in g.edges() {
                let disjoint = !e.touches(f.u) && !e.touches(f.v);
                let res = four_regular_spanning_circuit(g, e.id, f.id);
                assert_eq!(res.is_ok(), disjoint);
                if let Ok(h) = res {
                    assert!(is_generic_circuit(&h));
                }
            }
        }
        assert!(spanning_circuit_good_ordering(g).unwrap().verify(g).is_ok());
    }
    assert!(spanning_circuit_good_ordering(&generators::obstacle_star().unwrap()).is_err());
}
