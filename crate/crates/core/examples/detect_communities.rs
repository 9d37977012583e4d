//! Runs Louvain and Infomap on every projection of the demo news graph.
//!
//! ```text
//! cargo run --release --example detect_communities -- [seed]
//! ```

use std::path::PathBuf;

use misinfograph::community::{detect, modularity, project, Method, ProjectionKind};
use misinfograph::propgraph::{read_tweets, GraphBundle, KeywordMode};

fn main() -> misinfograph::Result<()> {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(42);
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/demo/tweets.ndjson");
    let bundle = GraphBundle::build(&read_tweets(&path)?, vec!["election".into()], KeywordMode::All)?;

    for kind in [ProjectionKind::Users, ProjectionKind::Tweets, ProjectionKind::Hashtags] {
        let projected = project(kind, &bundle.news_graph, &bundle.hashtag_network)?;
        println!(
            "{kind}: {} nodes, total weight {}",
            projected.graph.node_count(),
            projected.graph.total_weight()
        );
        for method in [Method::Louvain, Method::Infomap] {
            let p = detect(&projected.graph, method, seed)?;
            let sizes: Vec<usize> = p.members().iter().map(Vec::len).collect();
            println!(
                "  {method:<8} {:>3} communities  {} = {:.4}  modularity {:.4}  largest {:?}",
                p.count,
                method.quality_name(),
                p.quality,
                modularity(&projected.graph, &p.assignment)?,
                &sizes[..sizes.len().min(5)]
            );
        }
    }
    Ok(())
}
