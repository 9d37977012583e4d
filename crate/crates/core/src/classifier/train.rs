use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::TrainConfig;
use super::loss::{bce_with_logits, bce_with_logits_grad};
use super::optim::Adam;
use super::params::ModelParams;
use super::transformer::{backward, forward_train};
use crate::corpus::LabeledDocument;
use crate::error::{Error, Result};
use crate::tokenizer::{encode_text, TokenSequence, Vocab};

/// Examples per gradient partial sum. Fixed so that the reduction order, and
/// therefore every bit of the result, does not depend on the thread count.
const GRAD_CHUNK: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub seq: TokenSequence,
    pub label: u8,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub params: ModelParams,
    /// Mean batch loss per epoch.
    pub history: Vec<f64>,
}

/// Tokenizes and encodes documents to the model's sequence length.
pub fn encode_documents(docs: &[LabeledDocument], vocab: &Vocab, max_seq_len: usize) -> Result<Vec<Example>> {
    docs.iter()
        .map(|d| {
            Ok(Example {
                seq: encode_text(vocab, &d.text, max_seq_len)?,
                label: d.label,
            })
        })
        .collect()
}

pub(crate) fn mix_seed(seed: u64, a: u64, b: u64) -> u64 {
    // splitmix64 finaliser over a simple combination
    let mut z = seed
        .wrapping_add(a.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(b.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mean loss and summed gradient of a batch. `dropout_seed` of `None`
/// disables dropout.
pub fn batch_gradient(
    params: &ModelParams,
    batch: &[&Example],
    dropout_seed: Option<u64>,
) -> Result<(f64, ModelParams)> {
    let partials: Vec<Result<(f64, ModelParams)>> = batch
        .par_chunks(GRAD_CHUNK)
        .enumerate()
        .map(|(ci, chunk)| {
            let mut grad = ModelParams::zeros(&params.config);
            let mut loss = 0.0;
            for (j, ex) in chunk.iter().enumerate() {
                let mut rng = dropout_seed
                    .map(|s| ChaCha8Rng::seed_from_u64(mix_seed(s, (ci * GRAD_CHUNK + j) as u64, 0)));
                let (logit, cache) = forward_train(params, &ex.seq, rng.as_mut())?;
                loss += bce_with_logits(logit, ex.label);
                backward(params, &cache, bce_with_logits_grad(logit, ex.label), &mut grad);
            }
            Ok((loss, grad))
        })
        .collect();

    let mut total = ModelParams::zeros(&params.config);
    let mut loss = 0.0;
    for part in partials {
        let (l, g) = part?;
        loss += l;
        total.add_scaled(&g, 1.0);
    }
    let n = batch.len() as f64;
    total.scale(1.0 / n);
    Ok((loss / n, total))
}

/// Mini-batch Adam on binary cross-entropy with logits.
pub fn train_examples(mut params: ModelParams, data: &[Example], cfg: &TrainConfig) -> Result<TrainOutcome> {
    cfg.validate()?;
    if data.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut shuffle_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut opt = Adam::new(&params, cfg);
    let mut history = Vec::with_capacity(cfg.epochs);
    let mut step: u64 = 0;

    for epoch in 0..cfg.epochs {
        order.shuffle(&mut shuffle_rng);
        let mut epoch_loss = 0.0;
        let mut batches = 0usize;
        for (bi, idx) in order.chunks(cfg.batch_size).enumerate() {
            let batch: Vec<&Example> = idx.iter().map(|&i| &data[i]).collect();
            let dropout_seed = mix_seed(cfg.seed, step, 1);
            let (loss, mut grad) = match batch_gradient(&params, &batch, Some(dropout_seed)) {
                Ok(r) => r,
                Err(Error::NonFinite { .. }) => return Err(Error::Diverged { epoch, batch: bi }),
                Err(e) => return Err(e),
            };
            if !loss.is_finite() {
                return Err(Error::Diverged { epoch, batch: bi });
            }
            opt.step(&mut params, &mut grad);
            if !params.is_finite() {
                return Err(Error::Diverged { epoch, batch: bi });
            }
            epoch_loss += loss;
            batches += 1;
            step += 1;
        }
        let mean = epoch_loss / batches as f64;
        log::debug!("epoch {epoch}: mean batch loss {mean:.6}");
        history.push(mean);
    }
    Ok(TrainOutcome { params, history })
}

/// Encodes `docs` with `vocab` and trains.
pub fn train(params: ModelParams, docs: &[LabeledDocument], vocab: &Vocab, cfg: &TrainConfig) -> Result<TrainOutcome> {
    if vocab.len() != params.config.vocab_size {
        return Err(Error::Vocab(format!(
            "vocab has {} tokens but model expects {}",
            vocab.len(),
            params.config.vocab_size
        )));
    }
    if docs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let data = encode_documents(docs, vocab, params.config.max_seq_len)?;
    train_examples(params, &data, cfg)
}
