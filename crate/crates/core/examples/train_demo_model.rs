//! Trains the small classifier bundled under `data/demo/` on a synthetic
//! planted-keyword corpus and writes its vocabulary and checkpoint.
//!
//! ```text
//! cargo run --release --example train_demo_model -- [out_dir]
//! ```

use std::path::PathBuf;
use std::time::Instant;

use misinfograph::classifier::{evaluate, save_checkpoint, train, ModelConfig, ModelParams, TrainConfig};
use misinfograph::corpus::split;
use misinfograph::synthetic::planted_keyword_corpus;
use misinfograph::tokenizer::train_vocab;

fn main() -> misinfograph::Result<()> {
    let out: PathBuf = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/demo"));
    std::fs::create_dir_all(&out).map_err(|e| misinfograph::Error::io(&out, e))?;

    let corpus = planted_keyword_corpus(2000, 7)?;
    let (train_set, val_set) = split(&corpus, 0.8, 7)?;
    let vocab = train_vocab(&train_set.texts(), 600)?;
    let model = ModelConfig {
        num_layers: 2,
        hidden_dim: 64,
        num_heads: 4,
        ffn_dim: 256,
        max_seq_len: 64,
        vocab_size: vocab.len(),
        dropout_rate: 0.1,
    };
    let cfg = TrainConfig::default();
    let params = ModelParams::init(&model, cfg.seed)?;
    println!("{} parameters, vocab {}", params.num_params(), vocab.len());

    let started = Instant::now();
    let outcome = train(params, train_set.documents(), &vocab, &cfg)?;
    println!("trained in {:.1?}; loss per epoch {:?}", started.elapsed(), outcome.history);

    let report = evaluate(&outcome.params, &vocab, val_set.documents(), 0.5)?;
    println!("validation precision {:.4} recall {:.4} f1 {:.4}", report.precision, report.recall, report.f1);

    vocab.save(out.join("vocab.txt"))?;
    save_checkpoint(out.join("model.bin"), &outcome.params, &vocab, cfg.seed)?;
    println!("wrote {}", out.display());
    Ok(())
}
