//! Model checkpoint file.
//!
//! Layout: the 8-byte magic `MSGCKPT1`, a little-endian u64 header length,
//! a JSON header (config, vocab fingerprint, seed, tensor table), then every
//! tensor as little-endian f64 in header order.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::ModelConfig;
use super::params::ModelParams;
use crate::error::{Error, Result};
use crate::tokenizer::Vocab;

const MAGIC: &[u8; 8] = b"MSGCKPT1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorEntry {
    pub name: String,
    pub len: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointHeader {
    pub config: ModelConfig,
    /// Hex [`Vocab::fingerprint`] of the vocabulary the model was trained with.
    pub vocab_hash: String,
    pub seed: u64,
    pub tensors: Vec<TensorEntry>,
}

pub fn encode_checkpoint(params: &ModelParams, vocab: &Vocab, seed: u64) -> Vec<u8> {
    let tensors = params.tensors();
    let header = CheckpointHeader {
        config: params.config.clone(),
        vocab_hash: format!("{:016x}", vocab.fingerprint()),
        seed,
        tensors: tensors
            .iter()
            .map(|(name, t)| TensorEntry {
                name: name.clone(),
                len: t.len(),
            })
            .collect(),
    };
    let header = serde_json::to_vec(&header).expect("header serializes");
    let mut out = Vec::with_capacity(16 + header.len() + 8 * params.num_params());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(header.len() as u64).to_le_bytes());
    out.extend_from_slice(&header);
    for (_, t) in &tensors {
        for x in t.iter() {
            out.extend_from_slice(&x.to_le_bytes());
        }
    }
    out
}

/// Parses a checkpoint without checking the vocabulary.
pub fn decode_checkpoint(bytes: &[u8]) -> Result<(CheckpointHeader, ModelParams)> {
    let bad = |m: &str| Error::Checkpoint(m.to_string());
    if bytes.len() < 16 || &bytes[..8] != MAGIC {
        return Err(bad("not a model checkpoint (bad magic)"));
    }
    let hlen = u64::from_le_bytes(bytes[8..16].try_into().unwrap()) as usize;
    let body = bytes.get(16..).unwrap_or_default();
    let header_bytes = body.get(..hlen).ok_or_else(|| bad("truncated header"))?;
    let header: CheckpointHeader =
        serde_json::from_slice(header_bytes).map_err(|e| Error::Checkpoint(e.to_string()))?;
    header.config.validate()?;

    let mut params = ModelParams::zeros(&header.config);
    let mut data = &body[hlen..];
    {
        let tensors = params.tensors_mut();
        if tensors.len() != header.tensors.len() {
            return Err(bad("tensor count does not match config"));
        }
        for ((name, dst), entry) in tensors.into_iter().zip(&header.tensors) {
            if name != entry.name || dst.len() != entry.len {
                return Err(Error::Checkpoint(format!(
                    "tensor `{}` ({}) does not match expected `{name}` ({})",
                    entry.name,
                    entry.len,
                    dst.len()
                )));
            }
            let need = 8 * entry.len;
            if data.len() < need {
                return Err(bad("truncated tensor data"));
            }
            for (x, chunk) in dst.iter_mut().zip(data[..need].chunks_exact(8)) {
                *x = f64::from_le_bytes(chunk.try_into().unwrap());
            }
            data = &data[need..];
        }
    }
    if !data.is_empty() {
        return Err(bad("trailing bytes after tensor data"));
    }
    Ok((header, params))
}

pub fn save_checkpoint(path: impl AsRef<Path>, params: &ModelParams, vocab: &Vocab, seed: u64) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_checkpoint(params, vocab, seed)).map_err(|e| Error::io(path, e))
}

/// Loads a checkpoint, refusing it if `vocab` is not the training vocabulary.
pub fn load_checkpoint(path: impl AsRef<Path>, vocab: &Vocab) -> Result<(CheckpointHeader, ModelParams)> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let (header, params) = decode_checkpoint(&bytes)?;
    let expected = format!("{:016x}", vocab.fingerprint());
    if header.vocab_hash != expected {
        return Err(Error::Checkpoint(format!(
            "vocab hash mismatch: checkpoint {} vs vocab {expected}",
            header.vocab_hash
        )));
    }
    Ok((header, params))
}
