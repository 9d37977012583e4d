use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::baseline::{featurize, BaselineModel};
use super::loss::sigmoid;
use super::metrics::{evaluate_scores, MetricsReport};
use super::params::ModelParams;
use super::transformer::forward;
use crate::corpus::LabeledDocument;
use crate::error::{Error, Result};
use crate::tokenizer::{encode_text, Vocab};

/// Default decision threshold; a probability equal to it counts as fake.
pub const DEFAULT_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub probability: f64,
    pub label: u8,
}

impl Prediction {
    pub fn from_probability(probability: f64, threshold: f64) -> Self {
        Self {
            probability,
            label: u8::from(probability >= threshold),
        }
    }

    /// Compares in logit space so that saturated probabilities (which round
    /// to exactly 0 or 1) still respect thresholds of 0 and 1.
    pub fn from_logit(logit: f64, threshold: f64) -> Self {
        let cut = (threshold / (1.0 - threshold)).ln();
        Self {
            probability: sigmoid(logit),
            label: u8::from(logit >= cut),
        }
    }
}

/// Anything that maps text to a logit for "fake".
pub trait TextScorer: Sync {
    fn logit(&self, text: &str) -> Result<f64>;

    /// Probability of "fake".
    fn score(&self, text: &str) -> Result<f64> {
        Ok(sigmoid(self.logit(text)?))
    }

    fn predict(&self, text: &str, threshold: f64) -> Result<Prediction> {
        Ok(Prediction::from_logit(self.logit(text)?, threshold))
    }
}

/// Transformer weights bundled with the vocabulary they were trained on.
#[derive(Debug, Clone)]
pub struct TransformerClassifier {
    pub params: ModelParams,
    pub vocab: Vocab,
}

impl TransformerClassifier {
    pub fn new(params: ModelParams, vocab: Vocab) -> Result<Self> {
        if vocab.len() != params.config.vocab_size {
            return Err(Error::Vocab(format!(
                "vocab has {} tokens but model expects {}",
                vocab.len(),
                params.config.vocab_size
            )));
        }
        Ok(Self { params, vocab })
    }
}

impl TextScorer for TransformerClassifier {
    fn logit(&self, text: &str) -> Result<f64> {
        let seq = encode_text(&self.vocab, text, self.params.config.max_seq_len)?;
        forward(&self.params, &seq)
    }
}

impl TextScorer for BaselineModel {
    fn logit(&self, text: &str) -> Result<f64> {
        Ok(self.logit(&featurize(text, self.hash_bits)))
    }
}

pub fn predict(params: &ModelParams, vocab: &Vocab, text: &str, threshold: f64) -> Result<Prediction> {
    let seq = encode_text(vocab, text, params.config.max_seq_len)?;
    Ok(Prediction::from_logit(forward(params, &seq)?, threshold))
}

/// Scores every document and reports metrics against its label.
pub fn evaluate_scorer(scorer: &dyn TextScorer, docs: &[LabeledDocument], threshold: f64) -> Result<MetricsReport> {
    if docs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let scores = docs
        .par_iter()
        .map(|d| scorer.score(&d.text))
        .collect::<Result<Vec<_>>>()?;
    let labels: Vec<u8> = docs.iter().map(|d| d.label).collect();
    evaluate_scores(&scores, &labels, threshold)
}

pub fn evaluate(params: &ModelParams, vocab: &Vocab, docs: &[LabeledDocument], threshold: f64) -> Result<MetricsReport> {
    let clf = TransformerClassifier::new(params.clone(), vocab.clone())?;
    evaluate_scorer(&clf, docs, threshold)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logit_zero_is_fake_at_default() {
        let p = Prediction::from_logit(0.0, DEFAULT_THRESHOLD);
        assert_eq!((p.probability, p.label), (0.5, 1));
    }

    #[test]
    fn very_negative_logit() {
        let p = Prediction::from_logit(-50.0, DEFAULT_THRESHOLD);
        assert!(p.probability < 1e-20);
        assert_eq!(p.label, 0);
    }

    #[test]
    fn threshold_one_never_fake() {
        for z in [-5.0, 0.0, 5.0, 30.0, 800.0] {
            assert_eq!(Prediction::from_logit(z, 1.0).label, 0);
        }
    }
}
