mod common;

use misinfograph::classifier::Prediction;
use misinfograph::community::{project_users, louvain, LabeledPartition, Method, ProjectionKind};
use misinfograph::pipeline::{
    annotate, run_pipeline, summarize, virality_trend, virality_trend_with, AnnotatedGraph, ExplorerDocument,
    ExportMeta, RunConfig, SCHEMA_VERSION,
};
use misinfograph::propgraph::{build_hashtag_network, build_news_graph, KeywordMode, NodeKind, Tweet};
use misinfograph::Error;
use proptest::prelude::*;

use common::{tweet, HashScorer, MarkerScorer};

const T0: i64 = 1_600_000_000;

fn burst(retweets: usize, spacing: i64) -> Vec<Tweet> {
    let mut tweets = vec![tweet("o", "author", T0, "breaking news", &["news"], None)];
    for i in 0..retweets {
        tweets.push(tweet(&format!("r{i}"), &format!("u{i}"), T0 + 1 + spacing * i as i64, "RT", &[], Some("o")));
    }
    tweets
}

fn annotated(tweets: &[Tweet], keyword: &str) -> AnnotatedGraph {
    let g = build_news_graph(tweets, &[keyword]).unwrap();
    annotate(&g, &MarkerScorer { marker: "hoax" }, 0.5).unwrap()
}

fn meta() -> ExportMeta {
    ExportMeta {
        seed: 1,
        threshold: 0.5,
        viral_threshold: 1000,
        bucket_seconds: 3600,
        keywords: vec!["news".into()],
        keyword_mode: KeywordMode::All,
        community: None,
    }
}

#[test]
fn viral_at_lands_in_the_crossing_bucket() {
    let a = annotated(&burst(1200, 9), "news");
    let trend = virality_trend(&a, 3600, 1000).unwrap();
    let crossing = T0 + 1 + 9 * 999;
    let bucket = (crossing - T0) / 3600;
    assert_eq!(trend.viral_at, Some(T0 + (bucket + 1) * 3600));
    assert_eq!(trend.viral_tweets, vec!["o".to_string()]);
    assert_eq!(trend.total_retweets(), 1200);
    let below = virality_trend(&annotated(&burst(999, 9), "news"), 3600, 1000).unwrap();
    assert_eq!(below.viral_at, None);
    assert!(below.viral_tweets.is_empty());
}

#[test]
fn trend_rejects_degenerate_parameters() {
    let a = annotated(&burst(3, 1), "news");
    assert!(virality_trend(&a, 0, 10).is_err());
    assert!(virality_trend(&a, 60, 0).is_err());
}

#[test]
fn retweets_inherit_the_original_label() {
    let tweets = vec![
        tweet("f", "a", T0, "news hoax", &[], None),
        tweet("t", "b", T0, "news report", &[], None),
        tweet("rf", "c", T0 + 5, "RT totally different", &[], Some("f")),
        tweet("rt", "d", T0 + 5, "RT hoax words here", &[], Some("t")),
    ];
    let a = annotated(&tweets, "news");
    let labels = a.retweet_labels();
    assert_eq!(labels["rf"], 1);
    assert_eq!(labels["rt"], 0);
    for (n, p) in a.nodes() {
        assert!((0.0..=1.0).contains(&p.probability), "{}", n.tweet_id);
    }
    assert!(annotate(&a.graph, &HashScorer, 1.5).is_err());
}

#[test]
fn summary_of_a_small_fixture() {
    let tweets = vec![
        tweet("o1", "alice", T0, "news hoax", &["x"], None),
        tweet("o2", "bob", T0 + 10, "news today", &[], None),
        tweet("r1", "bob", T0 + 20, "RT", &[], Some("o1")),
        tweet("r2", "alice", T0 + 30, "RT", &[], Some("o2")),
        tweet("r3", "bob", T0 + 40, "RT", &[], Some("o1")),
    ];
    let s = summarize(&annotated(&tweets, "news"));
    assert_eq!((s.nodes, s.links, s.originals, s.retweets), (5, 3, 2, 3));
    assert_eq!((s.distinct_users, s.fake_originals, s.real_originals), (2, 1, 1));
    assert_eq!((s.unobserved_originals, s.skew_rejected), (0, 0));
    assert_eq!((s.first_timestamp, s.last_timestamp), (Some(T0), Some(T0 + 40)));
}

#[test]
fn minimal_export_validates_against_schema() {
    let tweets = vec![tweet("o", "a", T0, "news", &[], None), tweet("r", "b", T0 + 60, "RT", &[], Some("o"))];
    let a = annotated(&tweets, "news");
    let trend = virality_trend(&a, 3600, 1000).unwrap();
    let doc = ExplorerDocument::build(&a, None, &trend, &summarize(&a), &build_hashtag_network(&tweets), meta()).unwrap();
    assert_eq!((doc.nodes.len(), doc.links.len()), (2, 1));
    let value: serde_json::Value = serde_json::from_str(&doc.to_json().unwrap()).unwrap();
    assert_eq!(common::schema_errors(&value), Vec::<String>::new());

    let mut bad = value.clone();
    bad["schema_version"] = 2.into();
    assert!(!common::schema_errors(&bad).is_empty());
    assert!(ExplorerDocument::from_json(&bad.to_string()).is_err());
}

#[test]
fn export_requires_matching_partition_ids() {
    let tweets = vec![
        tweet("o", "a", T0, "news", &[], None),
        tweet("r", "b", T0 + 1, "RT", &[], Some("o")),
    ];
    let a = annotated(&tweets, "news");
    let proj = project_users(&a.graph).unwrap();
    let mut labeled = LabeledPartition::new(&proj, &louvain(&proj.graph, 0).unwrap(), 0).unwrap();
    labeled.nodes[0].id = "stranger".into();
    let trend = virality_trend(&a, 3600, 1000).unwrap();
    let err = ExplorerDocument::build(&a, Some(&labeled), &trend, &summarize(&a), &build_hashtag_network(&tweets), meta())
        .unwrap_err();
    assert!(matches!(err, Error::IdMismatch(_)), "{err}");
}

#[test]
fn pipeline_options() {
    let tweets = common::random_cascade(3, 5, 40, 0.3).parsed();
    let mut cfg = RunConfig::new(vec!["topic".into()]);
    cfg.projection = ProjectionKind::Hashtags;
    assert!(run_pipeline(&tweets, &HashScorer, &cfg).is_err());

    cfg.projection = ProjectionKind::Tweets;
    cfg.method = Method::Infomap;
    cfg.per_hashtag = true;
    let doc = run_pipeline(&tweets, &HashScorer, &cfg).unwrap();
    let c = doc.meta.community.as_ref().unwrap();
    assert_eq!((c.method, c.projection, c.quality_name.as_str()), (Method::Infomap, ProjectionKind::Tweets, "map_equation_bits"));
    assert!(doc.nodes.iter().all(|n| n.community.is_some()));
    assert!(doc.trend.per_hashtag.is_some());

    let lonely = vec![tweet("o", "a", T0, "topic", &[], None)];
    let doc = run_pipeline(&lonely, &HashScorer, &RunConfig::new(vec!["topic".into()])).unwrap();
    assert!(doc.meta.community.is_none());
    assert_eq!(doc.nodes[0].community, None);
}

#[test]
fn export_keys_are_sorted() {
    let tweets = common::random_cascade(8, 4, 10, 0.3).parsed();
    let doc = run_pipeline(&tweets, &HashScorer, &RunConfig::new(vec!["topic".into()])).unwrap();
    let text = doc.to_json().unwrap();
    assert!(text.ends_with("}\n"));
    let top: Vec<usize> = ["hashtag_links", "hashtag_nodes", "links", "meta", "nodes", "schema_version", "summary", "trend"]
        .iter()
        .map(|k| text.find(&format!("\n  \"{k}\"")).unwrap())
        .collect();
    assert!(top.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(doc.schema_version, SCHEMA_VERSION);
}

proptest! {
    #![proptest_config(common::proptest_config())]

    #[test]
    fn viral_at_is_monotone_in_threshold(seed in any::<u64>(), retweets in 0usize..150, t1 in 1u64..40, dt in 0u64..40) {
        let tweets = common::random_cascade(seed, 4, retweets, 0.3).parsed();
        let a = annotate(&build_news_graph(&tweets, &["topic"]).unwrap(), &HashScorer, 0.5).unwrap();
        let low = virality_trend(&a, 1800, t1).unwrap().viral_at;
        let high = virality_trend(&a, 1800, t1 + dt).unwrap().viral_at;
        match (low, high) {
            (None, Some(_)) => prop_assert!(false, "higher threshold went viral first"),
            (Some(l), Some(h)) => prop_assert!(l <= h),
            _ => {}
        }
    }

    #[test]
    fn trend_buckets_conserve_retweets(seed in any::<u64>(), retweets in 0usize..120, width in 1i64..20_000) {
        let tweets = common::random_cascade(seed, 5, retweets, 0.3).parsed();
        let a = annotate(&build_news_graph(&tweets, &["topic"]).unwrap(), &HashScorer, 0.5).unwrap();
        let trend = virality_trend_with(&a, width, 10, true).unwrap();
        prop_assert_eq!(trend.total_retweets() as usize, retweets);
        let mut cf = 0;
        let mut cr = 0;
        for (i, b) in trend.buckets.iter().enumerate() {
            prop_assert_eq!(b.start, trend.origin.unwrap() + i as i64 * width);
            prop_assert_eq!(b.end, b.start + width);
            cf += b.fake;
            cr += b.real;
            prop_assert_eq!((b.cumulative_fake, b.cumulative_real), (cf, cr));
        }
    }

    #[test]
    fn annotate_preserves_topology(seed in any::<u64>(), retweets in 0usize..60) {
        let tweets = common::random_cascade(seed, 6, retweets, 0.5).parsed();
        let g = build_news_graph(&tweets, &["topic"]).unwrap();
        let a = annotate(&g, &HashScorer, 0.5).unwrap();
        prop_assert_eq!(&a.graph, &g);
        prop_assert_eq!(a.predictions.len(), g.node_count());
        let idx = g.index();
        for e in &g.edges {
            let (s, t) = (&a.predictions[idx[e.source.as_str()]], &a.predictions[idx[e.target.as_str()]]);
            prop_assert_eq!(s, t);
        }
        let short = vec![Prediction::from_probability(0.1, 0.5); g.node_count() + 1];
        prop_assert!(AnnotatedGraph::new(g.clone(), short, 0.5).is_err());
    }

    #[test]
    fn export_round_trips(seed in any::<u64>(), retweets in 0usize..60, any_mode in any::<bool>(), infomap in any::<bool>()) {
        let tweets = common::random_cascade(seed, 5, retweets, 0.4).parsed();
        let mut cfg = RunConfig::new(vec!["topic".into(), "alpha".into()]);
        cfg.keyword_mode = if any_mode { KeywordMode::Any } else { KeywordMode::All };
        cfg.method = if infomap { Method::Infomap } else { Method::Louvain };
        cfg.seed = seed;
        let doc = run_pipeline(&tweets, &HashScorer, &cfg).unwrap();
        let text = doc.to_json().unwrap();
        let back = ExplorerDocument::from_json(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(back.to_json().unwrap(), text.clone());
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(common::schema_errors(&value), Vec::<String>::new());
        prop_assert_eq!(doc.nodes.iter().filter(|n| n.kind == NodeKind::Retweet).count(), doc.links.len());
    }
}
