//! Induces a WordPiece vocabulary and encodes a sentence.
//!
//! ```text
//! cargo run --example tokenize -- "Officials CONFIRMED the coverups, reportedly!"
//! ```

use misinfograph::synthetic::planted_keyword_corpus;
use misinfograph::tokenizer::{encode_text, tokenize, train_vocab};

fn main() -> misinfograph::Result<()> {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "Officials CONFIRMED the coverups, reportedly!".to_string());
    let corpus = planted_keyword_corpus(500, 3)?;
    let vocab = train_vocab(&corpus.texts(), 300)?;
    println!("vocab of {} pieces, fingerprint {:016x}", vocab.len(), vocab.fingerprint());

    let pieces = tokenize(&vocab, &text);
    println!("pieces: {pieces:?}");
    let seq = encode_text(&vocab, &text, 16)?;
    println!("ids:    {:?}", seq.ids);
    println!("mask:   {:?}", seq.attention_mask);
    println!("length: {}", seq.true_length);
    Ok(())
}
