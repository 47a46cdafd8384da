use proptest::prelude::*;

use spread_lab::algebra::{build_system, generic_rank, greedy_transcendence_base, FieldConfig};
use spread_lab::graph::{add_leaf, complete, parse_graph, Graph, GraphFormat};
use spread_lab::scalar::SECONDARY_PRIME;
use spread_lab::spread::{analytic_spread, engine_spread, Policy};

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let slots = complete(n).edge_vec();
        proptest::collection::vec(any::<bool>(), slots.len()).prop_map(move |mask| {
            let edges = slots.iter().zip(&mask).filter(|(_, &keep)| keep).map(|(&e, _)| e);
            Graph::new(n, edges).unwrap()
        })
    })
}

fn cfg(seed: u64) -> FieldConfig {
    FieldConfig::default().with_seed(seed)
}

fn rank(g: &Graph, c: &FieldConfig) -> usize {
    generic_rank(&build_system(g), c).unwrap().rank
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_is_stable_across_fields(g in graph(6), seed in any::<u64>()) {
        let a = rank(&g, &cfg(seed));
        let b = rank(&g, &FieldConfig::prime(SECONDARY_PRIME).with_seed(seed));
        let c = rank(&g, &FieldConfig::exact().with_seed(seed));
        prop_assert_eq!(a, b);
        prop_assert_eq!(b, c);
    }

    #[test]
    fn rank_respects_matrix_dimensions(g in graph(7), seed in any::<u64>()) {
        let r = rank(&g, &cfg(seed));
        prop_assert!(r <= g.edge_count().min(2 * g.n()));
    }

    #[test]
    fn appending_generators_never_lowers_rank(g in graph(6), seed in any::<u64>(), cut in any::<prop::sample::Index>()) {
        let sys = build_system(&g);
        let k = if sys.is_empty() { 0 } else { cut.index(sys.len() + 1) };
        let prefix: Vec<usize> = (0..k).collect();
        let c = cfg(seed);
        let small = generic_rank(&sys.subsystem(&prefix), &c).unwrap().rank;
        prop_assert!(small <= generic_rank(&sys, &c).unwrap().rank);
    }

    #[test]
    fn greedy_base_size_ignores_order(g in graph(6), seed in any::<u64>(), perm_seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let sys = build_system(&g);
        let c = cfg(seed);
        let mut order: Vec<usize> = (0..sys.len()).collect();
        order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(perm_seed));
        let base = greedy_transcendence_base(&sys, &order, &c).unwrap();
        prop_assert_eq!(base.kept.len(), generic_rank(&sys, &c).unwrap().rank);
        // every kept set is independent on its own
        let kept = sys.subsystem(&base.kept);
        prop_assert_eq!(generic_rank(&kept, &c).unwrap().rank, base.kept.len());
    }

    #[test]
    fn disjoint_blocks_add(a in graph(5), b in graph(5), seed in any::<u64>()) {
        let c = cfg(seed);
        prop_assert_eq!(rank(&a.disjoint_union(&b), &c), rank(&a, &c) + rank(&b, &c));
    }

    #[test]
    fn serialization_round_trips(g in graph(8)) {
        prop_assert_eq!(parse_graph(&g.to_edge_list(), GraphFormat::EdgeList).unwrap(), g.clone());
        prop_assert_eq!(parse_graph(&g.to_json(), GraphFormat::Json).unwrap(), g);
    }

    #[test]
    fn leaf_chains_add_one_each(g in graph(5), attaches in proptest::collection::vec(any::<prop::sample::Index>(), 0..4)) {
        let c = cfg(1);
        let start = engine_spread(&g, &c).unwrap();
        let mut h = g;
        for idx in &attaches {
            let v = idx.index(h.n()) + 1;
            h = add_leaf(&h, v).unwrap();
        }
        prop_assert_eq!(engine_spread(&h, &c).unwrap(), start + attaches.len());
    }

    #[test]
    fn formulas_agree_with_engine(g in graph(6)) {
        let r = analytic_spread(&g, &cfg(5), Policy::CrossCheck);
        prop_assert!(r.is_ok(), "{:?}", r.err());
        let r = r.unwrap();
        prop_assert!(r.bounds.all_satisfied);
        prop_assert_eq!(r.base_edges.map(|b| b.len()), Some(r.value));
    }
}

#[test]
fn monotone_chain_from_spanning_tree_to_complete() {
    use rand::{seq::SliceRandom, SeedableRng};
    let c = cfg(9);
    for n in 2..=6 {
        let tree = spread_lab::graph::generate_family(spread_lab::graph::Family::RandomTree { n, seed: n as u64 }).unwrap();
        let mut missing: Vec<(usize, usize)> = complete(n).edges().filter(|&(i, j)| !tree.has_edge(i, j)).collect();
        missing.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(n as u64));
        let mut g = tree;
        let mut last = engine_spread(&g, &c).unwrap();
        assert_eq!(last, n - 1);
        for (i, j) in missing {
            g = g.with_edge(i, j).unwrap();
            let l = engine_spread(&g, &c).unwrap();
            assert!(l >= last, "{g}: {l} < {last}");
            last = l;
        }
        assert_eq!(last, 2 * n - 3);
    }
}
