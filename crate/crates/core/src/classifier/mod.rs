//! Transformer binary classifier trained with binary cross-entropy on logits,
//! a hashed n-gram logistic regression baseline, and evaluation metrics.

mod baseline;
mod checkpoint;
mod config;
mod loss;
mod metrics;
mod optim;
mod params;
mod predict;
mod train;
pub mod transformer;

pub use baseline::{baseline_predict, featurize, train_baseline, train_baseline_with, BaselineConfig, BaselineModel};
pub use checkpoint::{decode_checkpoint, encode_checkpoint, load_checkpoint, save_checkpoint, CheckpointHeader, TensorEntry};
pub use config::{ClassifierSpec, ModelConfig, TrainConfig};
pub use loss::{bce_with_logits, bce_with_logits_grad, sigmoid};
pub use metrics::{evaluate_scores, pr_curve, ClassScores, Confusion, MetricsReport, PrPoint};
pub use optim::Adam;
pub use params::{LayerParams, ModelParams, INIT_STD};
pub use predict::{evaluate, evaluate_scorer, predict, Prediction, TextScorer, TransformerClassifier, DEFAULT_THRESHOLD};
pub use train::{batch_gradient, encode_documents, train, train_examples, Example, TrainOutcome};
pub use transformer::{backward, forward, forward_train, ForwardCache};
