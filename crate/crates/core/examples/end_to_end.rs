//! Scores, clusters and exports the demo stream, as `misinfograph run` does.
//!
//! ```text
//! cargo run --release --example end_to_end -- [out.json]
//! ```

use std::path::PathBuf;

use misinfograph::classifier::{load_checkpoint, TransformerClassifier};
use misinfograph::community::Method;
use misinfograph::pipeline::{run_pipeline, RunConfig};
use misinfograph::propgraph::read_tweets;
use misinfograph::tokenizer::Vocab;

fn main() -> misinfograph::Result<()> {
    let out: PathBuf = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("misinfograph-demo.json"));
    let demo = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/demo");
    let vocab = Vocab::load(demo.join("vocab.txt"))?;
    let (_, params) = load_checkpoint(demo.join("model.bin"), &vocab)?;
    let model = TransformerClassifier::new(params, vocab)?;
    let tweets = read_tweets(demo.join("tweets.ndjson"))?;

    for method in [Method::Louvain, Method::Infomap] {
        let mut cfg = RunConfig::new(vec!["election".into()]);
        cfg.method = method;
        let doc = run_pipeline(&tweets, &model, &cfg)?;
        let s = &doc.summary;
        let community = doc.meta.community.as_ref().map(|c| (c.count, c.quality));
        println!(
            "{method}: {} nodes, {} links, {} fake / {} real originals, communities {:?}",
            s.nodes, s.links, s.fake_originals, s.real_originals, community
        );
        if method == Method::Louvain {
            doc.write(&out)?;
            println!("wrote {}", out.display());
        }
    }
    Ok(())
}
