//! Scores sentences with the bundled demo checkpoint.
//!
//! ```text
//! cargo run --release --example classify_text -- "shocking secret cure exposed"
//! ```

use std::path::PathBuf;

use misinfograph::classifier::{load_checkpoint, TextScorer, TransformerClassifier, DEFAULT_THRESHOLD};
use misinfograph::tokenizer::Vocab;

fn main() -> misinfograph::Result<()> {
    let demo = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/demo");
    let vocab = Vocab::load(demo.join("vocab.txt"))?;
    let (header, params) = load_checkpoint(demo.join("model.bin"), &vocab)?;
    println!("checkpoint: {} layers, hidden {}, seed {}", header.config.num_layers, header.config.hidden_dim, header.seed);
    let model = TransformerClassifier::new(params, vocab)?;

    let mut texts: Vec<String> = std::env::args().skip(1).collect();
    if texts.is_empty() {
        texts = vec![
            "officials confirm the report according to the agency".into(),
            "shocking hoax exposed they do not want you to know".into(),
        ];
    }
    for text in &texts {
        let p = model.predict(text, DEFAULT_THRESHOLD)?;
        let label = if p.label == 1 { "fake" } else { "real" };
        println!("{label} ({:.3})  {text}", p.probability);
    }
    Ok(())
}
