use conmms::graphs::{
    block_cut_tree, blocks_within, hamiltonian_path_in_block, is_clique, is_cycle, multipartite_parts, recognize,
    split_pair, GraphClass,
};
use conmms::{Error, GoodsGraph, VertexSet};
use conmms_testkit::{naive_blocks, naive_multipartite_parts, naive_split_pair};
use proptest::prelude::*;

fn arb_graph(max_n: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let len = pairs.len();
        (Just(n), proptest::collection::vec(any::<bool>(), len))
            .prop_map(move |(n, keep)| (n, pairs.iter().zip(keep).filter(|(_, k)| *k).map(|(e, _)| *e).collect()))
    })
}

fn sets(v: Vec<Vec<usize>>) -> Vec<VertexSet> {
    v.into_iter().map(|s| s.into_iter().collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn blocks_match_naive((n, edges) in arb_graph(8)) {
        let g = GoodsGraph::with_indexed_vertices(n, &edges).unwrap();
        let mut got = blocks_within(&g, &g.all_vertices());
        got.sort();
        prop_assert_eq!(got, sets(naive_blocks(n, &edges)));
    }

    #[test]
    fn split_pair_matches_naive((n, edges) in arb_graph(8)) {
        let g = GoodsGraph::with_indexed_vertices(n, &edges).unwrap();
        let want = naive_split_pair(n, &edges).map(|(k, i)| (k.into_iter().collect(), i.into_iter().collect()));
        prop_assert_eq!(split_pair(&g, &g.all_vertices()), want);
    }

    #[test]
    fn multipartite_parts_match_naive((n, edges) in arb_graph(8)) {
        let g = GoodsGraph::with_indexed_vertices(n, &edges).unwrap();
        let want = naive_multipartite_parts(n, &edges).map(sets);
        prop_assert_eq!(multipartite_parts(&g, &g.all_vertices()), want);
    }

    #[test]
    fn class_flags_follow_the_blocks((n, edges) in arb_graph(8)) {
        let g = GoodsGraph::with_indexed_vertices(n, &edges).unwrap();
        let w = recognize(&g);
        let blocks = sets(naive_blocks(n, &edges));
        let clique = |b: &VertexSet| is_clique(&g, b);
        let cycle = |b: &VertexSet| is_cycle(&g, b);
        prop_assert_eq!(w.has(GraphClass::BlockGraph), blocks.iter().all(clique));
        prop_assert_eq!(w.has(GraphClass::Cactus), blocks.iter().all(|b| b.len() <= 2 || cycle(b)));
        prop_assert_eq!(w.has(GraphClass::BlockCactus), blocks.iter().all(|b| clique(b) || cycle(b)));
        prop_assert_eq!(w.has(GraphClass::Split), naive_split_pair(n, &edges).is_some());
        prop_assert_eq!(w.has(GraphClass::CompleteMultipartite), naive_multipartite_parts(n, &edges).is_some());
    }

    #[test]
    fn block_cut_tree_is_a_tree((n, edges) in arb_graph(8)) {
        let g = GoodsGraph::with_indexed_vertices(n, &edges).unwrap();
        match block_cut_tree(&g) {
            Ok(t) => {
                // Block sizes minus one add up to n - 1 exactly when the blocks form a tree.
                let sum: usize = t.blocks.iter().map(|b| b.len() - 1).sum();
                prop_assert_eq!(sum, n - 1);
                prop_assert_eq!(t.tree_edges.len(), t.blocks.len() + t.cut_vertices.len() - 1);
                if t.blocks.len() > 1 {
                    for &b in &t.terminal_blocks {
                        prop_assert_eq!(t.cuts_of(b).len(), 1);
                    }
                }
            }
            Err(Error::Structural(_)) => prop_assert!(!recognize(&g).has(GraphClass::Connected)),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn hamiltonian_paths_in_cycle_and_clique_blocks((n, edges) in arb_graph(8)) {
        let g = GoodsGraph::with_indexed_vertices(n, &edges).unwrap();
        for b in blocks_within(&g, &g.all_vertices()) {
            for &end in &b {
                match hamiltonian_path_in_block(&g, &b, end) {
                    Ok(path) => {
                        prop_assert_eq!(path.len(), b.len());
                        prop_assert_eq!(*path.last().unwrap(), end);
                        prop_assert_eq!(path.iter().copied().collect::<VertexSet>(), b.clone());
                        prop_assert!(path.windows(2).all(|w| g.adjacent(w[0], w[1])));
                    }
                    Err(Error::UnsupportedBlock) => prop_assert!(!is_clique(&g, &b) && !is_cycle(&g, &b)),
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }
}

#[test]
fn named_examples() {
    let tri_pendant = GoodsGraph::new(["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("a", "c"), ("c", "d")]).unwrap();
    let w = recognize(&tri_pendant);
    assert!(w.has(GraphClass::BlockGraph) && w.has(GraphClass::BlockCactus) && w.has(GraphClass::Split));
    assert_eq!(block_cut_tree(&tri_pendant).unwrap().blocks.len(), 2);

    let k22 = GoodsGraph::with_indexed_vertices(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
    let w = recognize(&k22);
    assert!(w.has(GraphClass::CompleteMultipartite) && w.has(GraphClass::Cycle));
    assert_eq!(w.parts.unwrap().iter().map(|p| p.len()).collect::<Vec<_>>(), vec![2, 2]);

    let star = GoodsGraph::with_indexed_vertices(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
    assert_eq!(recognize(&star).split_pair, Some((VertexSet::from([0]), VertexSet::from([1, 2, 3]))));

    let disconnected = GoodsGraph::with_indexed_vertices(3, &[(0, 1)]).unwrap();
    assert!(!recognize(&disconnected).has(GraphClass::Connected));
}
