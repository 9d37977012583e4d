//! Binary classification metrics with "fake" (label 1) as the positive class.
//!
//! Ratios whose denominator is zero are reported as 0.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

impl Confusion {
    /// Counts with prediction `score >= threshold`.
    pub fn at_threshold(scores: &[f64], labels: &[u8], threshold: f64) -> Self {
        let mut c = Confusion::default();
        for (&s, &y) in scores.iter().zip(labels) {
            match (s >= threshold, y == 1) {
                (true, true) => c.tp += 1,
                (true, false) => c.fp += 1,
                (false, false) => c.tn += 1,
                (false, true) => c.fn_ += 1,
            }
        }
        c
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn precision(&self) -> f64 {
        ratio(self.tp as f64, (self.tp + self.fp) as f64)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.tp as f64, (self.tp + self.fn_) as f64)
    }

    pub fn f1(&self) -> f64 {
        let (p, r) = (self.precision(), self.recall());
        ratio(2.0 * p * r, p + r)
    }

    pub fn accuracy(&self) -> f64 {
        ratio((self.tp + self.tn) as f64, self.total() as f64)
    }

    /// Matthews correlation coefficient.
    pub fn mcc(&self) -> f64 {
        let (tp, fp, tn, fn_) = (self.tp as f64, self.fp as f64, self.tn as f64, self.fn_ as f64);
        let den = ((tp + fp) * (tp + fn_) * (tn + fp) * (tn + fn_)).sqrt();
        ratio(tp * tn - fp * fn_, den)
    }

    /// The same counts with the real class (label 0) taken as positive.
    pub fn flipped(&self) -> Self {
        Confusion {
            tp: self.tn,
            fp: self.fn_,
            tn: self.tp,
            fn_: self.fp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassScores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl From<&Confusion> for ClassScores {
    fn from(c: &Confusion) -> Self {
        Self {
            precision: c.precision(),
            recall: c.recall(),
            f1: c.f1(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrPoint {
    pub threshold: f64,
    pub recall: f64,
    pub precision: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub threshold: f64,
    pub confusion: Confusion,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub mcc: f64,
    pub accuracy: f64,
    /// Scores with label 0 as the positive class.
    pub real_class: ClassScores,
    /// Unweighted mean of the fake and real class scores.
    pub macro_avg: ClassScores,
    /// One point per distinct score, thresholds descending.
    pub pr_curve: Vec<PrPoint>,
}

/// Precision/recall at every distinct score used as a threshold.
pub fn pr_curve(scores: &[f64], labels: &[u8]) -> Vec<PrPoint> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let positives = labels.iter().filter(|&&y| y == 1).count() as f64;
    let (mut tp, mut fp) = (0u64, 0u64);
    let mut points = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        while i < order.len() && scores[order[i]] == s {
            if labels[order[i]] == 1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push(PrPoint {
            threshold: s,
            recall: ratio(tp as f64, positives),
            precision: ratio(tp as f64, (tp + fp) as f64),
        });
    }
    points
}

/// Full report from scores (probabilities of "fake") and true labels.
pub fn evaluate_scores(scores: &[f64], labels: &[u8], threshold: f64) -> Result<MetricsReport> {
    if scores.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if scores.len() != labels.len() {
        return Err(Error::InvalidArgument(format!(
            "{} scores but {} labels",
            scores.len(),
            labels.len()
        )));
    }
    if labels.iter().any(|&y| y > 1) {
        return Err(Error::InvalidArgument("labels must be 0 or 1".into()));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::InvalidArgument("NaN score".into()));
    }
    let confusion = Confusion::at_threshold(scores, labels, threshold);
    let fake = ClassScores::from(&confusion);
    let real = ClassScores::from(&confusion.flipped());
    Ok(MetricsReport {
        threshold,
        confusion,
        precision: fake.precision,
        recall: fake.recall,
        f1: fake.f1,
        mcc: confusion.mcc(),
        accuracy: confusion.accuracy(),
        real_class: real,
        macro_avg: ClassScores {
            precision: (fake.precision + real.precision) / 2.0,
            recall: (fake.recall + real.recall) / 2.0,
            f1: (fake.f1 + real.f1) / 2.0,
        },
        pr_curve: pr_curve(scores, labels),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_predictions() {
        let r = evaluate_scores(&[0.9, 0.1, 0.8, 0.2], &[1, 0, 1, 0], 0.5).unwrap();
        assert_eq!((r.precision, r.recall, r.f1, r.mcc), (1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn all_positive_has_zero_mcc() {
        let r = evaluate_scores(&[0.9, 0.9, 0.8, 0.7], &[1, 0, 1, 0], 0.5).unwrap();
        assert_eq!(r.confusion.tn + r.confusion.fn_, 0);
        assert_eq!(r.mcc, 0.0);
        assert_eq!(r.recall, 1.0);
        assert_eq!(r.precision, 0.5);
    }

    #[test]
    fn inverted_predictions() {
        let r = evaluate_scores(&[0.1, 0.9], &[1, 0], 0.5).unwrap();
        assert_eq!(r.mcc, -1.0);
        assert_eq!(r.f1, 0.0);
    }

    #[test]
    fn boundary_is_positive() {
        let r = evaluate_scores(&[0.5], &[1], 0.5).unwrap();
        assert_eq!(r.confusion.tp, 1);
    }

    #[test]
    fn empty_is_error() {
        assert!(evaluate_scores(&[], &[], 0.5).is_err());
    }

    #[test]
    fn pr_curve_ends_at_full_recall() {
        let pts = pr_curve(&[0.3, 0.7, 0.7, 0.1], &[1, 0, 1, 0]);
        assert_eq!(pts.len(), 3);
        assert_eq!(pts[0].threshold, 0.7);
        assert_eq!((pts[0].recall, pts[0].precision), (0.5, 0.5));
        assert_eq!(pts.last().unwrap().recall, 1.0);
        assert_eq!(pts.last().unwrap().precision, 0.5);
    }

    #[test]
    fn macro_average() {
        let r = evaluate_scores(&[0.9, 0.6, 0.2, 0.1], &[1, 0, 0, 0], 0.5).unwrap();
        assert_eq!(r.real_class.precision, 1.0);
        assert!((r.real_class.recall - 2.0 / 3.0).abs() < 1e-15);
        assert!((r.macro_avg.precision - 0.75).abs() < 1e-15);
    }
}
