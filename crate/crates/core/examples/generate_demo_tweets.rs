//! Writes the bundled 500-tweet demo stream.
//!
//! ```text
//! cargo run --example generate_demo_tweets -- [out_file]
//! ```

use std::path::PathBuf;

use misinfograph::propgraph::tweets_to_ndjson;
use misinfograph::synthetic::demo_tweets;

/// Seed of the bundled `data/demo/tweets.ndjson`.
const DEMO_SEED: u64 = 2020;

fn main() -> misinfograph::Result<()> {
    let out: PathBuf = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/demo/tweets.ndjson"));
    let tweets = demo_tweets(DEMO_SEED);
    std::fs::write(&out, tweets_to_ndjson(&tweets)).map_err(|e| misinfograph::Error::io(&out, e))?;
    println!("{} tweets -> {}", tweets.len(), out.display());
    Ok(())
}
