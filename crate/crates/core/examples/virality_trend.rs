//! Retweet activity over time on the demo stream, scored by the demo model.
//!
//! ```text
//! cargo run --release --example virality_trend -- [viral_threshold]
//! ```

use std::path::PathBuf;

use misinfograph::classifier::{load_checkpoint, TransformerClassifier};
use misinfograph::pipeline::{annotate, virality_trend_with};
use misinfograph::propgraph::{build_news_graph, read_tweets};
use misinfograph::tokenizer::Vocab;

fn main() -> misinfograph::Result<()> {
    let threshold: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(25);
    let demo = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/demo");
    let vocab = Vocab::load(demo.join("vocab.txt"))?;
    let (_, params) = load_checkpoint(demo.join("model.bin"), &vocab)?;
    let model = TransformerClassifier::new(params, vocab)?;

    let graph = build_news_graph(&read_tweets(demo.join("tweets.ndjson"))?, &["election"])?;
    let annotated = annotate(&graph, &model, 0.5)?;
    let trend = virality_trend_with(&annotated, 3 * 3600, threshold, true)?;

    println!("{} buckets of 3 h, {} retweets", trend.buckets.len(), trend.total_retweets());
    for b in &trend.buckets {
        println!(
            "  {:>6} s  fake {:>3} real {:>3}  cumulative {:>3} / {:>3}",
            b.start - trend.origin.unwrap_or(0),
            b.fake,
            b.real,
            b.cumulative_fake,
            b.cumulative_real
        );
    }
    println!("threshold {threshold}: viral_at {:?}, viral originals {:?}", trend.viral_at, trend.viral_tweets);
    for h in trend.per_hashtag.iter().flatten() {
        println!("  #{:<14} total {:>4} viral_at {:?}", h.tag, h.total, h.viral_at);
    }
    Ok(())
}
