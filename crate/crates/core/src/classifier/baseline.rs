//! Logistic regression over hashed unigram and bigram counts.

use std::collections::BTreeMap;
use std::hash::Hasher;

use fnv::FnvHasher;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::loss::sigmoid;
use crate::corpus::LabeledDocument;
use crate::error::{Error, Result};
use crate::tokenizer::basic_split;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineConfig {
    /// log2 of the hashed feature space size.
    pub hash_bits: u32,
    pub epochs: usize,
    pub learning_rate: f64,
    pub l2: f64,
    pub seed: u64,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        Self {
            hash_bits: 18,
            epochs: 10,
            learning_rate: 0.1,
            l2: 1e-6,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineModel {
    pub hash_bits: u32,
    pub weights: Vec<f64>,
    pub bias: f64,
}

fn bucket(feature: &str, bits: u32) -> usize {
    let mut h = FnvHasher::default();
    h.write(feature.as_bytes());
    (h.finish() & ((1u64 << bits) - 1)) as usize
}

/// Sparse hashed unigram+bigram counts, sorted by bucket.
pub fn featurize(text: &str, hash_bits: u32) -> Vec<(usize, f64)> {
    let words = basic_split(text);
    let mut counts: BTreeMap<usize, f64> = BTreeMap::new();
    for w in &words {
        *counts.entry(bucket(w, hash_bits)).or_insert(0.0) += 1.0;
    }
    for pair in words.windows(2) {
        let bigram = format!("{} {}", pair[0], pair[1]);
        *counts.entry(bucket(&bigram, hash_bits)).or_insert(0.0) += 1.0;
    }
    counts.into_iter().collect()
}

impl BaselineModel {
    pub fn logit(&self, features: &[(usize, f64)]) -> f64 {
        self.bias + features.iter().map(|&(i, v)| self.weights[i] * v).sum::<f64>()
    }

    pub fn predict_proba(&self, text: &str) -> f64 {
        sigmoid(self.logit(&featurize(text, self.hash_bits)))
    }
}

pub fn train_baseline(docs: &[LabeledDocument]) -> Result<BaselineModel> {
    train_baseline_with(docs, &BaselineConfig::default())
}

/// Shuffled per-example SGD on the logistic loss with L2 shrinkage.
pub fn train_baseline_with(docs: &[LabeledDocument], cfg: &BaselineConfig) -> Result<BaselineModel> {
    if docs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if !(1..=30).contains(&cfg.hash_bits) {
        return Err(Error::InvalidArgument(format!("hash_bits {} out of range", cfg.hash_bits)));
    }
    let data: Vec<(Vec<(usize, f64)>, f64)> = docs
        .iter()
        .map(|d| (featurize(&d.text, cfg.hash_bits), f64::from(d.label)))
        .collect();
    let mut model = BaselineModel {
        hash_bits: cfg.hash_bits,
        weights: vec![0.0; 1 << cfg.hash_bits],
        bias: 0.0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<usize> = (0..data.len()).collect();
    for epoch in 0..cfg.epochs {
        order.shuffle(&mut rng);
        let lr = cfg.learning_rate / (1.0 + epoch as f64);
        for &i in &order {
            let (x, y) = &data[i];
            let err = sigmoid(model.logit(x)) - y;
            for &(j, v) in x {
                let w = &mut model.weights[j];
                *w -= lr * (err * v + cfg.l2 * *w);
            }
            model.bias -= lr * err;
        }
    }
    Ok(model)
}

/// Probability of "fake" under the baseline.
pub fn baseline_predict(model: &BaselineModel, text: &str) -> f64 {
    model.predict_proba(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separable_single_feature() {
        let docs: Vec<LabeledDocument> = (0..20)
            .map(|i| {
                let word = if i % 2 == 0 { "alpha" } else { "omega" };
                LabeledDocument::new(format!("{word} {}", "x ".repeat(i % 3)), (i % 2) as u8, "toy")
            })
            .collect();
        let m = train_baseline(&docs).unwrap();
        for d in &docs {
            let pred = (m.predict_proba(&d.text) >= 0.5) as u8;
            assert_eq!(pred, d.label, "{}", d.text);
        }
    }

    #[test]
    fn empty_corpus() {
        assert!(matches!(train_baseline(&[]), Err(Error::EmptyCorpus)));
    }

    #[test]
    fn deterministic() {
        let docs = vec![
            LabeledDocument::new("a b c", 1, "t"),
            LabeledDocument::new("c d e", 0, "t"),
            LabeledDocument::new("a e", 1, "t"),
        ];
        assert_eq!(train_baseline(&docs).unwrap(), train_baseline(&docs).unwrap());
    }

    #[test]
    fn features_include_bigrams() {
        let f = featurize("a b", 18);
        assert_eq!(f.len(), 3);
        assert!(f.iter().all(|&(_, v)| v == 1.0));
    }
}
