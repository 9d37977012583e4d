//! Builds the news graph for a keyword from the demo tweet stream.
//!
//! ```text
//! cargo run --example propagation_graph -- election
//! ```

use std::path::PathBuf;

use misinfograph::propgraph::{build_news_graph, node_size, parse_keywords, read_tweets, SizeMode};

fn main() -> misinfograph::Result<()> {
    let keywords = parse_keywords(&std::env::args().nth(1).unwrap_or_else(|| "election".into()));
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/demo/tweets.ndjson");
    let tweets = read_tweets(&path)?;
    let graph = build_news_graph(&tweets, &keywords)?;

    println!(
        "{} tweets in, {} nodes ({} originals, {} retweets), {} edges, depth {}",
        tweets.len(),
        graph.node_count(),
        graph.originals().count(),
        graph.retweets().count(),
        graph.edge_count(),
        graph.depth()
    );
    println!("{} unobserved originals, skewed retweets rejected: {:?}", graph.unobserved_count(), graph.skew_rejected);

    let mut top: Vec<_> = graph.originals().collect();
    top.sort_by(|a, b| b.out_degree.cmp(&a.out_degree).then(a.tweet_id.cmp(&b.tweet_id)));
    for n in top.iter().take(5) {
        println!(
            "{} by {:<8} retweets {:>3}  size {:.2} / {:.2}  {:?}",
            n.tweet_id,
            n.user_id,
            n.out_degree,
            node_size(n, SizeMode::OutDegree),
            node_size(n, SizeMode::Followers),
            n.text
        );
    }
    let first = &graph.edges[0];
    println!("first edge {} -> {} after {} s", first.source, first.target, first.time_weight);
    Ok(())
}
