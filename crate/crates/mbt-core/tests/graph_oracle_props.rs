use proptest::prelude::*;

use mbt_core::graph::{
    degree_census, gen_dag, gen_digraph, gen_ugraph, permutation_dag, read_graph, validate_dir_tree, validate_undir_tree, write_graph, Digraph, Graph,
    UGraph,
};
use mbt_core::oracle::{brute_mbt_dag, brute_mbt_directed, brute_mbt_undirected};

fn small_ugraph() -> impl Strategy<Value = UGraph> {
    (1usize..=8, any::<u64>()).prop_flat_map(|(n, seed)| (0..=n * (n - 1) / 2).prop_map(move |m| gen_ugraph(n, m, seed)))
}

fn small_dag() -> impl Strategy<Value = Digraph> {
    (1usize..=9, any::<u64>()).prop_flat_map(|(n, seed)| (0..=(n * (n - 1) / 2).min(14)).prop_map(move |m| gen_dag(n, m, seed)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_round_trip_undirected(g in small_ugraph()) {
        let text = write_graph(&Graph::Undir(g.clone()));
        let back = read_graph(&text).unwrap();
        prop_assert_eq!(&write_graph(&back), &text);
        prop_assert_eq!(back, Graph::Undir(g));
    }

    #[test]
    fn text_round_trip_directed(n in 1usize..8, m in 0usize..20, seed in any::<u64>()) {
        let g = gen_digraph(n, m.min(n * (n - 1)), seed);
        let text = write_graph(&Graph::Dir(g.clone()));
        prop_assert_eq!(read_graph(&text).unwrap(), Graph::Dir(g));
    }

    #[test]
    fn permutation_dags_are_acyclic(values in proptest::collection::btree_set(-50i64..50, 0..12).prop_flat_map(|s| Just(s.into_iter().collect::<Vec<_>>()).prop_shuffle())) {
        let g = permutation_dag(&values).unwrap();
        prop_assert!(g.is_acyclic());
        for &(u, v) in g.arcs() {
            prop_assert!(u > v && values[u] > values[v]);
        }
    }

    #[test]
    fn dag_and_directed_oracles_agree(g in small_dag(), r in 0usize..9) {
        let r = r % g.n();
        let a = brute_mbt_dag(&g, r).unwrap();
        let b = brute_mbt_directed(&g, r).unwrap();
        prop_assert_eq!(a.size, b.size);
        prop_assert!(validate_dir_tree(&g, &a.tree).is_ok());
        prop_assert!(validate_dir_tree(&g, &b.tree).is_ok());
    }

    #[test]
    fn adding_an_edge_never_lowers_opt(g in small_ugraph(), a in 0usize..8, b in 0usize..8) {
        let (a, b) = (a % g.n(), b % g.n());
        prop_assume!(a != b && !g.has_edge(a, b));
        let before = brute_mbt_undirected(&g, 3).unwrap();
        let bigger = UGraph::new(g.n(), g.edges().iter().copied().chain([(a, b)])).unwrap();
        let after = brute_mbt_undirected(&bigger, 3).unwrap();
        prop_assert!(after.size >= before.size);
        prop_assert!(validate_undir_tree(&bigger, &after.tree, None).is_ok());
        prop_assert!(degree_census(&after.tree).unwrap().identity_holds());
    }
}
