//! Hashtag co-occurrence network of the demo tweet stream.
//!
//! ```text
//! cargo run --example hashtag_network
//! ```

use std::path::PathBuf;

use misinfograph::propgraph::{build_hashtag_network, read_tweets};

fn main() -> misinfograph::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/demo/tweets.ndjson");
    let tweets = read_tweets(&path)?;
    let net = build_hashtag_network(&tweets);
    println!("{} tags, {} co-occurring pairs", net.node_count(), net.edge_count());

    let mut tags = net.node_list();
    tags.sort_by(|a, b| b.count.cmp(&a.count).then(a.tag.cmp(&b.tag)));
    for t in tags.iter().take(6) {
        println!("  #{:<16} {:>4}", t.tag, t.count);
    }
    let mut links = net.link_list();
    links.sort_by(|a, b| b.weight.cmp(&a.weight));
    for l in links.iter().take(6) {
        println!("  #{} + #{}: {}", l.source, l.target, l.weight);
    }
    Ok(())
}
