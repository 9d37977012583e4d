mod common;

use misinfograph::community::{
    dense_labels, detect, infomap, infomap_traced, louvain, louvain_traced, map_equation, modularity, project_users,
    visit_entropy, Method, UGraph,
};
use misinfograph::propgraph::build_news_graph;
use proptest::prelude::*;

use common::{map_equation_oracle, modularity_oracle, set_partitions};

fn graph_of(n: usize, edges: &[(usize, usize, f64)]) -> UGraph {
    UGraph::new(n, edges.iter().copied()).unwrap()
}

#[test]
fn two_triangles_have_modularity_one_half() {
    let g = graph_of(6, &common::two_triangles_edges());
    assert_eq!(modularity(&g, &[0, 0, 0, 1, 1, 1]).unwrap(), 0.5);
    let p = louvain(&g, 0).unwrap();
    assert!(common::same_partition(&p.assignment, &[0, 0, 0, 1, 1, 1]));
    assert_eq!(p.quality, 0.5);
}

#[test]
fn planted_cliques_recovered_by_both_methods() {
    let g = common::two_cliques();
    let planted = [0, 0, 0, 0, 1, 1, 1, 1];
    for seed in 0..20 {
        for method in [Method::Louvain, Method::Infomap] {
            let p = detect(&g, method, seed).unwrap();
            p.validate().unwrap();
            assert!(common::same_partition(&p.assignment, &planted), "{method} seed {seed}: {:?}", p.assignment);
        }
    }
}

#[test]
fn quality_traces_are_monotone() {
    for seed in 0..30 {
        let edges = common::random_graph(seed, 14, 0.3, 3);
        if edges.is_empty() {
            continue;
        }
        let g = graph_of(14, &edges);
        let (p, trace) = louvain_traced(&g, seed).unwrap();
        assert!(trace.windows(2).all(|w| w[1] >= w[0] - 1e-12), "{trace:?}");
        assert!((trace.last().unwrap() - p.quality).abs() < 1e-9);
        let (p, trace) = infomap_traced(&g, seed).unwrap();
        assert!(trace.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{trace:?}");
        assert!((trace.last().unwrap() - p.quality).abs() < 1e-9);
    }
}

#[test]
fn louvain_gap_to_exhaustive_optimum() {
    let mut worst: f64 = 0.0;
    let mut optimal = 0;
    let mut total = 0;
    for seed in 0..150 {
        let n = 4 + (seed as usize % 5);
        let edges = common::random_graph(seed, n, 0.45, 3);
        if edges.is_empty() {
            continue;
        }
        let best = set_partitions(n)
            .iter()
            .map(|c| modularity_oracle(n, &edges, c))
            .fold(f64::NEG_INFINITY, f64::max);
        let q = louvain(&graph_of(n, &edges), seed).unwrap().quality;
        assert!(q <= best + 1e-12);
        worst = worst.max(best - q);
        optimal += usize::from(best - q < 1e-12);
        total += 1;
    }
    println!("louvain optimal on {optimal}/{total} graphs, worst gap {worst:.4}");
}

#[test]
fn isolated_nodes_stay_singletons() {
    let g = graph_of(5, &[(0, 1, 1.0), (1, 2, 1.0)]);
    for method in [Method::Louvain, Method::Infomap] {
        let p = detect(&g, method, 1).unwrap();
        assert_ne!(p.assignment[3], p.assignment[4]);
        assert!(p.assignment[..3].iter().all(|&c| c != p.assignment[3] && c != p.assignment[4]));
    }
    assert!(louvain(&graph_of(3, &[]), 0).is_err());
}

#[test]
fn users_projection_counts_retweets_between_distinct_users() {
    let tweets = vec![
        common::tweet("o1", "alice", 0, "news", &[], None),
        common::tweet("r1", "bob", 5, "RT news", &[], Some("o1")),
        common::tweet("r2", "bob", 6, "RT news", &[], Some("o1")),
        common::tweet("r3", "alice", 7, "RT news", &[], Some("o1")),
        common::tweet("r4", "carol", 8, "RT news", &[], Some("missing")),
    ];
    let g = build_news_graph(&tweets, &["news"]).unwrap();
    let p = project_users(&g).unwrap();
    assert_eq!(p.ids, vec!["alice", "bob", "carol"]);
    let (a, b, c) = (p.position("alice").unwrap(), p.position("bob").unwrap(), p.position("carol").unwrap());
    assert_eq!(p.graph.total_weight(), 2.0);
    assert_eq!(p.graph.neighbors(a), &[(b, 2.0)]);
    assert!(p.graph.neighbors(c).is_empty());
}

proptest! {
    #![proptest_config(common::proptest_config())]

    #[test]
    fn modularity_matches_definition_on_every_partition(seed in any::<u64>(), n in 2usize..=6, max_w in 1u32..4) {
        let edges = common::random_graph(seed, n, 0.6, max_w);
        prop_assume!(!edges.is_empty());
        let g = graph_of(n, &edges);
        for c in set_partitions(n) {
            let q = modularity(&g, &c).unwrap();
            prop_assert!((q - modularity_oracle(n, &edges, &c)).abs() < 1e-12);
        }
    }

    #[test]
    fn map_equation_matches_codebook_form(seed in any::<u64>(), n in 2usize..=6, max_w in 1u32..4) {
        let edges = common::random_graph(seed, n, 0.6, max_w);
        prop_assume!(!edges.is_empty());
        let g = graph_of(n, &edges);
        for c in set_partitions(n) {
            let l = map_equation(&g, &c).unwrap();
            prop_assert!((l - map_equation_oracle(n, &edges, &c)).abs() < 1e-9);
            prop_assert!(l >= -1e-12);
        }
        let one = vec![0; n];
        prop_assert!((map_equation(&g, &one).unwrap() - visit_entropy(&g).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn coarsening_preserves_quality(seed in any::<u64>(), n in 2usize..20, labels in prop::collection::vec(0usize..5, 20)) {
        let edges = common::random_graph(seed, n, 0.4, 3);
        prop_assume!(!edges.is_empty());
        let g = graph_of(n, &edges);
        let (assignment, count) = dense_labels(&labels[..n]);
        let coarse = g.coarsen(&assignment, count);
        let identity: Vec<usize> = (0..count).collect();
        prop_assert!((modularity(&coarse, &identity).unwrap() - modularity(&g, &assignment).unwrap()).abs() < 1e-12);
        prop_assert!((coarse.total_weight() - g.total_weight()).abs() < 1e-12);
        let merged = vec![0; count];
        prop_assert!((modularity(&coarse, &merged).unwrap() - modularity(&g, &vec![0; n]).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn detection_is_deterministic_and_self_consistent(seed in any::<u64>(), n in 2usize..25) {
        let edges = common::random_graph(seed, n, 0.25, 2);
        prop_assume!(!edges.is_empty());
        let g = graph_of(n, &edges);
        let a = louvain(&g, seed).unwrap();
        prop_assert_eq!(&a, &louvain(&g, seed).unwrap());
        a.validate().unwrap();
        prop_assert!((a.quality - modularity(&g, &a.assignment).unwrap()).abs() < 1e-12);
        prop_assert!(a.quality >= modularity(&g, &(0..n).collect::<Vec<_>>()).unwrap() - 1e-12);
        let b = infomap(&g, seed).unwrap();
        prop_assert_eq!(&b, &infomap(&g, seed).unwrap());
        b.validate().unwrap();
        prop_assert!((b.quality - map_equation(&g, &b.assignment).unwrap()).abs() < 1e-12);
        prop_assert!(b.quality <= map_equation(&g, &(0..n).collect::<Vec<_>>()).unwrap() + 1e-12);
    }
}
