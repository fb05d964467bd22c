use proptest::prelude::*;

use mbt_core::graph::{gen_ugraph, validate_undir_tree, UGraph};
use mbt_core::oracle::{brute_mbt_undirected, brute_mbt_undirected_rooted};
use mbt_core::treewidth::{
    heuristic_td, read_gr, read_td, solve_rooted_tw, solve_unrooted_tw, to_nice, to_special, validate_nice, validate_td, write_gr, write_td, NiceKind,
    TdError, TreeDecomposition,
};

fn graph(max_n: usize, max_m: usize) -> impl Strategy<Value = UGraph> {
    (1..=max_n, any::<u64>()).prop_flat_map(move |(n, seed)| (0..=max_m.min(n * (n - 1) / 2)).prop_map(move |m| gen_ugraph(n, m, seed)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn rooted_dp_matches_rooted_oracle(g in graph(9, 14), s in 0usize..9) {
        let s = s % g.n();
        let td = heuristic_td(&g);
        let sol = solve_rooted_tw(&g, s, &td).unwrap();
        // the oracle bound is exclusive at the root: below 3 means at most 2
        let truth = brute_mbt_undirected_rooted(&g, s, 3).unwrap();
        prop_assert_eq!(sol.tree.size(), truth.size);
        prop_assert!(validate_undir_tree(&g, &sol.tree, Some(s)).is_ok());
    }

    #[test]
    fn unrooted_dp_matches_oracle_on_any_valid_decomposition(g in graph(9, 14)) {
        // a single bag holding everything is valid but maximally wide
        let td = TreeDecomposition::new(vec![(0..g.n()).collect()], vec![]);
        prop_assume!(g.n() <= 7);
        let sol = solve_unrooted_tw(&g, &td).unwrap();
        prop_assert_eq!(sol.tree.size(), brute_mbt_undirected(&g, 3).unwrap().size);
    }

    #[test]
    fn nice_and_special_forms_validate(g in graph(10, 15), s in 0usize..10) {
        let s = s % g.n();
        let td = heuristic_td(&g);
        prop_assert!(validate_td(&g, &td).is_ok());
        let nice = to_nice(&td, &g).unwrap();
        prop_assert!(validate_nice(&nice, &g, &[]).is_ok());
        prop_assert!(nice.width() <= td.width());
        let introduced = nice.nodes.iter().filter(|n| matches!(n.kind, NiceKind::IntroduceEdge(..))).count();
        prop_assert_eq!(introduced, g.m());

        let sp = to_special(&td, &g, s).unwrap();
        prop_assert!(sp.nice.width() <= td.width() + 1);
        prop_assert!(sp.nice.nodes.iter().all(|n| n.bag.contains(&sp.s_prime)));
        prop_assert!(validate_td(&sp.graph, &sp.nice.as_td()).is_ok());
    }

    #[test]
    fn pace_files_round_trip(g in graph(10, 15)) {
        let back = read_gr(&write_gr(&g)).unwrap();
        prop_assert_eq!(&back, &g);
        let td = heuristic_td(&g);
        let again = read_td(&write_td(&td, g.n())).unwrap();
        prop_assert_eq!(&again.bags, &td.bags);
        prop_assert!(validate_td(&g, &again).is_ok());
    }
}

#[test]
fn broken_decompositions_are_rejected() {
    let g = UGraph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
    // vertex 1 appears in two bags that are not connected through bags holding it
    let scattered = TreeDecomposition::new(vec![vec![0, 1], vec![2, 3], vec![1, 2]], vec![(0, 1), (1, 2)]);
    assert!(matches!(validate_td(&g, &scattered), Err(TdError::Scattered(1))));
    let missing_edge = TreeDecomposition::new(vec![vec![0, 1], vec![2, 3]], vec![(0, 1)]);
    assert!(matches!(validate_td(&g, &missing_edge), Err(TdError::EdgeUncovered(1, 2))));
    assert!(solve_unrooted_tw(&g, &missing_edge).is_err());
}
