//! Lowercasing WordPiece tokenizer.
//!
//! Text is lowercased, split on whitespace, and every punctuation character is
//! split off as its own word. Each word is then decomposed by greedy
//! longest-match against the vocabulary, with non-initial pieces carrying the
//! `##` prefix. Words that cannot be fully decomposed become `[UNK]`.
//!
//! Vocabularies are either loaded from a token-per-line file or induced from a
//! corpus by frequency-based pair merging.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::hash::Hasher;
use std::path::Path;

use fnv::FnvHasher;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const PAD: &str = "[PAD]";
pub const UNK: &str = "[UNK]";
pub const CLS: &str = "[CLS]";
pub const SEP: &str = "[SEP]";

pub const CONTINUATION: &str = "##";

const RESERVED: [&str; 4] = [PAD, UNK, CLS, SEP];

/// Words longer than this many characters map straight to `[UNK]`.
const MAX_WORD_CHARS: usize = 100;

/// WordPiece vocabulary. Line number in the vocab file is the token id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocab {
    tokens: Vec<String>,
    index: HashMap<String, u32>,
    pad_id: u32,
    unk_id: u32,
    cls_id: u32,
    sep_id: u32,
}

impl Vocab {
    /// Builds a vocabulary from an ordered token list. The four reserved
    /// tokens must be present; duplicates are rejected.
    pub fn from_tokens(tokens: Vec<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(tokens.len());
        for (id, tok) in tokens.iter().enumerate() {
            if tok.is_empty() {
                return Err(Error::Vocab(format!("empty token at id {id}")));
            }
            if index.insert(tok.clone(), id as u32).is_some() {
                return Err(Error::Vocab(format!("duplicate token `{tok}`")));
            }
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::Vocab(format!("missing reserved token {name}")))
        };
        Ok(Self {
            pad_id: lookup(PAD)?,
            unk_id: lookup(UNK)?,
            cls_id: lookup(CLS)?,
            sep_id: lookup(SEP)?,
            tokens,
            index,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let tokens = text
            .lines()
            .map(|l| l.trim_end_matches('\r').to_string())
            .filter(|l| !l.is_empty())
            .collect();
        Self::from_tokens(tokens)
    }

    pub fn to_text(&self) -> String {
        let mut out = self.tokens.join("\n");
        out.push('\n');
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn id(&self, token: &str) -> Option<u32> {
        self.index.get(token).copied()
    }

    pub fn token(&self, id: u32) -> Option<&str> {
        self.tokens.get(id as usize).map(String::as_str)
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn pad_id(&self) -> u32 {
        self.pad_id
    }

    pub fn unk_id(&self) -> u32 {
        self.unk_id
    }

    pub fn cls_id(&self) -> u32 {
        self.cls_id
    }

    pub fn sep_id(&self) -> u32 {
        self.sep_id
    }

    /// Stable 64-bit fingerprint of the token list, stored in model
    /// checkpoints to detect vocab/model mismatches.
    pub fn fingerprint(&self) -> u64 {
        let mut h = FnvHasher::default();
        for tok in &self.tokens {
            h.write(tok.as_bytes());
            h.write_u8(b'\n');
        }
        h.finish()
    }
}

/// Fixed-length encoded input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenSequence {
    pub ids: Vec<u32>,
    pub attention_mask: Vec<u8>,
    pub true_length: usize,
}

impl TokenSequence {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

pub fn is_punctuation(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(c as u32, 0xA1..=0xBF | 0x2000..=0x206F | 0x2E00..=0x2E7F | 0x3000..=0x303F)
            && !c.is_alphanumeric()
            && !c.is_whitespace()
}

/// Lowercases and splits into words; punctuation characters become words of
/// their own.
pub fn basic_split(text: &str) -> Vec<String> {
    let lowered = text.to_lowercase();
    let mut words = Vec::new();
    let mut current = String::new();
    for c in lowered.chars() {
        if c.is_whitespace() || c.is_control() {
            if !current.is_empty() {
                words.push(std::mem::take(&mut current));
            }
        } else if is_punctuation(c) {
            if !current.is_empty() {
                words.push(std::mem::take(&mut current));
            }
            words.push(c.to_string());
        } else {
            current.push(c);
        }
    }
    if !current.is_empty() {
        words.push(current);
    }
    words
}

/// Greedy longest-match decomposition of one (already lowercased) word.
/// Returns `None` if some suffix has no matching piece.
pub fn wordpiece(vocab: &Vocab, word: &str) -> Option<Vec<String>> {
    let chars: Vec<char> = word.chars().collect();
    if chars.is_empty() || chars.len() > MAX_WORD_CHARS {
        return None;
    }
    let mut pieces = Vec::new();
    let mut start = 0;
    while start < chars.len() {
        let mut end = chars.len();
        let mut found = None;
        while start < end {
            let body: String = chars[start..end].iter().collect();
            let candidate = if start == 0 {
                body
            } else {
                format!("{CONTINUATION}{body}")
            };
            if vocab.contains(&candidate) {
                found = Some(candidate);
                break;
            }
            end -= 1;
        }
        pieces.push(found?);
        start = end;
    }
    Some(pieces)
}

/// Tokenizes text into WordPiece strings. Total: unknown words become `[UNK]`.
pub fn tokenize(vocab: &Vocab, text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for word in basic_split(text) {
        match wordpiece(vocab, &word) {
            Some(pieces) => out.extend(pieces),
            None => out.push(UNK.to_string()),
        }
    }
    out
}

/// `[CLS]` + ids truncated to `max_seq_len - 2` + `[SEP]`, padded with `[PAD]`.
pub fn encode(vocab: &Vocab, tokens: &[String], max_seq_len: usize) -> Result<TokenSequence> {
    if max_seq_len < 3 {
        return Err(Error::InvalidArgument(format!(
            "max_seq_len must be at least 3, got {max_seq_len}"
        )));
    }
    let mut ids = Vec::with_capacity(max_seq_len);
    ids.push(vocab.cls_id());
    ids.extend(
        tokens
            .iter()
            .take(max_seq_len - 2)
            .map(|t| vocab.id(t).unwrap_or(vocab.unk_id())),
    );
    ids.push(vocab.sep_id());
    let true_length = ids.len();
    ids.resize(max_seq_len, vocab.pad_id());
    let mut attention_mask = vec![1u8; true_length];
    attention_mask.resize(max_seq_len, 0);
    Ok(TokenSequence {
        ids,
        attention_mask,
        true_length,
    })
}

/// Convenience: tokenize then encode.
pub fn encode_text(vocab: &Vocab, text: &str, max_seq_len: usize) -> Result<TokenSequence> {
    encode(vocab, &tokenize(vocab, text), max_seq_len)
}

/// Induces a WordPiece vocabulary by repeatedly merging the most frequent
/// adjacent piece pair (ties: lexicographically smallest pair).
///
/// The result starts with the reserved tokens, then the observed alphabet
/// (word-initial and `##` continuation characters, sorted), then merged
/// pieces in merge order, up to `target_size` entries.
pub fn train_vocab<S: AsRef<str>>(texts: &[S], target_size: usize) -> Result<Vocab> {
    if target_size < RESERVED.len() + 1 {
        return Err(Error::InvalidArgument(format!(
            "target vocab size must be at least {}, got {target_size}",
            RESERVED.len() + 1
        )));
    }
    let mut word_counts: BTreeMap<String, u64> = BTreeMap::new();
    for text in texts {
        for word in basic_split(text.as_ref()) {
            if word.chars().count() <= MAX_WORD_CHARS {
                *word_counts.entry(word).or_insert(0) += 1;
            }
        }
    }
    if word_counts.is_empty() {
        return Err(Error::EmptyCorpus);
    }

    let mut words: Vec<(Vec<String>, u64)> = word_counts
        .into_iter()
        .map(|(w, n)| {
            let pieces = w
                .chars()
                .enumerate()
                .map(|(i, c)| {
                    if i == 0 {
                        c.to_string()
                    } else {
                        format!("{CONTINUATION}{c}")
                    }
                })
                .collect();
            (pieces, n)
        })
        .collect();

    let alphabet: BTreeSet<String> = words.iter().flat_map(|(p, _)| p.iter().cloned()).collect();
    let base = RESERVED.len() + alphabet.len();
    if target_size < base {
        return Err(Error::InvalidArgument(format!(
            "target vocab size {target_size} is smaller than reserved tokens plus observed alphabet ({base})"
        )));
    }

    let mut tokens: Vec<String> = RESERVED.iter().map(|s| s.to_string()).collect();
    tokens.extend(alphabet);
    let mut seen: BTreeSet<String> = tokens.iter().cloned().collect();

    while tokens.len() < target_size {
        let mut pair_counts: BTreeMap<(&str, &str), u64> = BTreeMap::new();
        for (pieces, n) in &words {
            for pair in pieces.windows(2) {
                *pair_counts.entry((&pair[0], &pair[1])).or_insert(0) += n;
            }
        }
        // BTreeMap iterates in lexicographic order, so the first maximum wins ties.
        let mut best: Option<((&str, &str), u64)> = None;
        for (pair, n) in &pair_counts {
            if best.is_none_or(|(_, b)| *n > b) {
                best = Some((*pair, *n));
            }
        }
        let Some(((left, right), _)) = best else {
            break;
        };
        let (left, right) = (left.to_string(), right.to_string());
        let merged = format!("{left}{}", right.trim_start_matches(CONTINUATION));

        for (pieces, _) in words.iter_mut() {
            let mut i = 0;
            let mut next = Vec::with_capacity(pieces.len());
            while i < pieces.len() {
                if i + 1 < pieces.len() && pieces[i] == left && pieces[i + 1] == right {
                    next.push(merged.clone());
                    i += 2;
                } else {
                    next.push(std::mem::take(&mut pieces[i]));
                    i += 1;
                }
            }
            *pieces = next;
        }
        if seen.insert(merged.clone()) {
            tokens.push(merged);
        }
    }
    Vocab::from_tokens(tokens)
}
