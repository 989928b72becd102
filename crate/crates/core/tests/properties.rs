use proptest::prelude::*;
use twotree::generators;
use twotree::io::{graph_to_json, parse_graph};
use twotree::sparsity::{is_2t, pebble_independent, TwoTreeVerdict};
use twotree::synthesis::{circuit_good_ordering, RootSpec};
use twotree::verify::{check_ordering, OrderingVerdict};
use twotree::{BranchKind, MultiGraph, VertexOrdering};

fn multigraph() -> impl Strategy<Value = MultiGraph> {
    (2usize..=9).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..=2 * n + 2).prop_map(move |pairs| {
            let pairs: Vec<_> = pairs.into_iter().filter(|(u, v)| u != v).collect();
            MultiGraph::from_edges(n, &pairs).unwrap()
        })
    })
}

fn graph_and_order() -> impl Strategy<Value = (MultiGraph, Vec<usize>)> {
    multigraph().prop_flat_map(|g| {
        let n = g.vertex_count();
        (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

proptest! {
    #[test]
    fn two_tree_unions_are_certified(n in 2usize..40, seed in any::<u64>()) {
        let g = generators::random_two_tree(n, seed).unwrap();
        match is_2t(&g).unwrap() {
            TwoTreeVerdict::Certificate(c) => prop_assert!(c.check(&g)),
            other => prop_assert!(false, "rejected: {:?}", other),
        }
    }

    #[test]
    fn verdicts_come_with_evidence(g in multigraph()) {
        match is_2t(&g).unwrap() {
            TwoTreeVerdict::Certificate(c) => prop_assert!(c.check(&g)),
            TwoTreeVerdict::Partition(p) => prop_assert!(p.check(&g)),
            TwoTreeVerdict::CountMismatch { edges, expected } => prop_assert_ne!(edges, expected),
        }
    }

    #[test]
    fn sparse_basis_is_independent_and_no_larger_for_larger_l(g in multigraph()) {
        let a = pebble_independent(&g, 2, 2).unwrap();
        let b = pebble_independent(&g, 2, 3).unwrap();
        prop_assert!(b.basis.len() <= a.basis.len());
        prop_assert_eq!(a.basis.len() + a.rejected.len(), g.edge_count());
        let kept = g.without_edges(&b.rejected);
        prop_assert!(pebble_independent(&kept, 2, 3).unwrap().independent);
    }

    #[test]
    fn reversal_swaps_the_verdict_roles((g, order) in graph_and_order()) {
        let n = g.vertex_count();
        let ord = VertexOrdering::new(order, n).unwrap();
        let fwd = check_ordering(&g, &ord).unwrap();
        let back = check_ordering(&g, &ord.reversed()).unwrap();
        prop_assert_eq!(fwd.is_good(), back.is_good());
        if let (OrderingVerdict::Good(p), OrderingVerdict::Good(_)) = (&fwd, &back) {
            let r = p.reversed();
            prop_assert_eq!(r.s(), p.t());
            prop_assert!(twotree::verify::verify_pair(&g, &ord.reversed(), &r).is_ok());
        }
    }

    #[test]
    fn graph_documents_round_trip(g in multigraph()) {
        let back = parse_graph(&graph_to_json(&g)).unwrap();
        prop_assert_eq!(back.edge_pairs(), g.edge_pairs());
    }

    #[test]
    fn circuit_results_reverse_into_results(n in 4usize..20, seed in any::<u64>(), pick in any::<prop::sample::Index>(), out in any::<bool>()) {
        let g = generators::henneberg_circuit(n, seed).unwrap();
        let e = &g.edges()[pick.index(g.edge_count())];
        let side = if out { BranchKind::Out } else { BranchKind::In };
        let res = circuit_good_ordering(&g, RootSpec { s: e.u, t: e.v, e: e.id, side }).unwrap();
        prop_assert!(res.verify(&g).is_ok());
        let rev = res.reversed();
        prop_assert!(rev.verify(&g).is_ok());
        prop_assert_eq!(rev.ordering.first(), Some(e.v));
        // the prescribed edge moves to the other branching
        let arcs = if out { &rev.pair.inn.arcs } else { &rev.pair.out.arcs };
        prop_assert!(arcs.contains(&e.id));
    }
}
