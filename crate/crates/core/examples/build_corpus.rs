//! Builds the merged corpus from the bundled source samples and splits it.
//!
//! ```text
//! cargo run --example build_corpus
//! ```

use std::path::PathBuf;

use misinfograph::corpus::{build_from_manifest, split, validation_size};

fn main() -> misinfograph::Result<()> {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/sources/manifest.toml");
    let (corpus, stats) = build_from_manifest(&manifest)?;
    for (source, s) in &stats {
        println!(
            "{source:>16}: {:>3} rows, {:>3} kept, {:>2} dropped, {:>2} duplicates",
            s.input, s.kept, s.dropped, s.duplicates
        );
    }
    let counts = corpus.counts();
    println!("{} documents: {} fake, {} real", corpus.len(), counts.fake, counts.real);

    let (train, val) = split(&corpus, 0.8, 42)?;
    println!("split 0.8: {} train, {} validation", train.len(), val.len());
    println!("at full scale 98532 documents hold out {}", validation_size(98_532, 0.8));

    for doc in val.documents().iter().take(3) {
        println!("  [{}] {} {:?}", doc.label, doc.source_id, doc.text);
    }
    Ok(())
}
