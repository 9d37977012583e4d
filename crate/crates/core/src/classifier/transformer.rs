//! Post-LN transformer encoder with a single-logit head on `[CLS]`, and its
//! hand-written reverse pass.
//!
//! Only positions with attention mask 1 are materialised. Masked positions
//! never act as keys, so their rows cannot influence the `[CLS]` output and
//! dropping them is exact.

use ndarray::{s, Array1, Array2, ArrayView1, Axis};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::params::{LayerParams, ModelParams};
use crate::error::{Error, Result};
use crate::tokenizer::TokenSequence;

const LN_EPS: f64 = 1e-12;
const GELU_C: f64 = 0.797_884_560_802_865_4; // sqrt(2/pi)
const GELU_K: f64 = 0.044_715;

struct LayerNormCache {
    xhat: Array2<f64>,
    inv_std: Array1<f64>,
}

struct LayerCache {
    input: Array2<f64>,
    q: Array2<f64>,
    k: Array2<f64>,
    v: Array2<f64>,
    probs: Vec<Array2<f64>>,
    ctx: Array2<f64>,
    attn_drop: Option<Array2<f64>>,
    ln1: LayerNormCache,
    h1: Array2<f64>,
    z1: Array2<f64>,
    act: Array2<f64>,
    ffn_drop: Option<Array2<f64>>,
    ln2: LayerNormCache,
}

/// Activations retained by [`forward_train`] for [`backward`].
pub struct ForwardCache {
    token_ids: Vec<usize>,
    positions: Vec<usize>,
    emb_ln: LayerNormCache,
    emb_drop: Option<Array2<f64>>,
    layers: Vec<LayerCache>,
    cls: Array1<f64>,
}

fn layer_norm(x: &Array2<f64>, gamma: &Array1<f64>, beta: &Array1<f64>) -> (Array2<f64>, LayerNormCache) {
    let n = x.nrows();
    let d = x.ncols() as f64;
    let mut xhat = x.clone();
    let mut inv_std = Array1::zeros(n);
    for (mut row, inv) in xhat.rows_mut().into_iter().zip(inv_std.iter_mut()) {
        let mean = row.sum() / d;
        row.mapv_inplace(|v| v - mean);
        let var = row.iter().map(|v| v * v).sum::<f64>() / d;
        *inv = 1.0 / (var + LN_EPS).sqrt();
        let s = *inv;
        row.mapv_inplace(|v| v * s);
    }
    let y = &xhat * gamma + beta;
    (y, LayerNormCache { xhat, inv_std })
}

/// Returns dx and accumulates dgamma/dbeta.
fn layer_norm_backward(
    dy: &Array2<f64>,
    cache: &LayerNormCache,
    gamma: &Array1<f64>,
    dgamma: &mut Array1<f64>,
    dbeta: &mut Array1<f64>,
) -> Array2<f64> {
    *dgamma += &(dy * &cache.xhat).sum_axis(Axis(0));
    *dbeta += &dy.sum_axis(Axis(0));
    let d = dy.ncols() as f64;
    let mut dx = dy * gamma;
    for ((mut row, xhat), &inv) in dx
        .rows_mut()
        .into_iter()
        .zip(cache.xhat.rows())
        .zip(cache.inv_std.iter())
    {
        let mean_d = row.sum() / d;
        let mean_dx = row.iter().zip(xhat.iter()).map(|(a, b)| a * b).sum::<f64>() / d;
        row.zip_mut_with(&xhat, |g, &xh| *g = inv * (*g - mean_d - xh * mean_dx));
    }
    dx
}

fn gelu(x: f64) -> f64 {
    0.5 * x * (1.0 + (GELU_C * (x + GELU_K * x * x * x)).tanh())
}

fn gelu_grad(x: f64) -> f64 {
    let t = (GELU_C * (x + GELU_K * x * x * x)).tanh();
    0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * GELU_C * (1.0 + 3.0 * GELU_K * x * x)
}

fn softmax_rows(s: &mut Array2<f64>) {
    for mut row in s.rows_mut() {
        let max = row.fold(f64::NEG_INFINITY, |m, &v| m.max(v));
        row.mapv_inplace(|v| (v - max).exp());
        let sum = row.sum();
        row.mapv_inplace(|v| v / sum);
    }
}

fn linear(x: &Array2<f64>, w: &Array2<f64>, b: &Array1<f64>) -> Array2<f64> {
    x.dot(w) + b
}

fn dropout_mask(shape: (usize, usize), rate: f64, rng: &mut ChaCha8Rng) -> Array2<f64> {
    let keep = 1.0 / (1.0 - rate);
    Array2::from_shape_fn(shape, |_| if rng.random::<f64>() < rate { 0.0 } else { keep })
}

fn check_finite(x: &Array2<f64>, location: impl FnOnce() -> String) -> Result<()> {
    if x.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite {
            location: location(),
        })
    }
}

fn validate_input(params: &ModelParams, seq: &TokenSequence) -> Result<()> {
    let cfg = &params.config;
    if seq.ids.len() != cfg.max_seq_len || seq.attention_mask.len() != cfg.max_seq_len {
        return Err(Error::InvalidArgument(format!(
            "sequence length {} does not match model max_seq_len {}",
            seq.ids.len(),
            cfg.max_seq_len
        )));
    }
    if seq.attention_mask.first() != Some(&1) {
        return Err(Error::InvalidArgument("position 0 must be unmasked".into()));
    }
    if let Some(m) = seq.attention_mask.iter().find(|&&m| m > 1) {
        return Err(Error::InvalidArgument(format!("attention mask value {m} is not 0/1")));
    }
    if let Some(&id) = seq.ids.iter().find(|&&id| id as usize >= cfg.vocab_size) {
        return Err(Error::InvalidArgument(format!(
            "token id {id} outside vocab of size {}",
            cfg.vocab_size
        )));
    }
    Ok(())
}

/// Inference logit (dropout disabled).
pub fn forward(params: &ModelParams, seq: &TokenSequence) -> Result<f64> {
    forward_train(params, seq, None).map(|(z, _)| z)
}

/// Forward pass keeping activations for [`backward`]. When `dropout` is
/// given, masks are drawn from it at the configured rate.
pub fn forward_train(
    params: &ModelParams,
    seq: &TokenSequence,
    mut dropout: Option<&mut ChaCha8Rng>,
) -> Result<(f64, ForwardCache)> {
    validate_input(params, seq)?;
    let cfg = &params.config;
    let rate = cfg.dropout_rate;
    let d = cfg.hidden_dim;
    let dh = cfg.head_dim();
    let scale = 1.0 / (dh as f64).sqrt();

    let positions: Vec<usize> = seq
        .attention_mask
        .iter()
        .enumerate()
        .filter(|(_, &m)| m == 1)
        .map(|(i, _)| i)
        .collect();
    let token_ids: Vec<usize> = positions.iter().map(|&p| seq.ids[p] as usize).collect();
    let n = positions.len();

    let mut emb = Array2::zeros((n, d));
    for (r, (&tok, &pos)) in token_ids.iter().zip(&positions).enumerate() {
        let mut row = emb.row_mut(r);
        row += &params.tok_emb.row(tok);
        row += &params.pos_emb.row(pos);
    }
    let (mut x, emb_ln) = layer_norm(&emb, &params.emb_ln_gamma, &params.emb_ln_beta);
    let emb_drop = match dropout.as_deref_mut() {
        Some(rng) if rate > 0.0 => {
            let m = dropout_mask((n, d), rate, rng);
            x *= &m;
            Some(m)
        }
        _ => None,
    };
    check_finite(&x, || "embeddings".into())?;

    let mut layers = Vec::with_capacity(cfg.num_layers);
    for (li, lp) in params.layers.iter().enumerate() {
        let q = linear(&x, &lp.wq, &lp.bq);
        let k = linear(&x, &lp.wk, &lp.bk);
        let v = linear(&x, &lp.wv, &lp.bv);
        let mut ctx = Array2::zeros((n, d));
        let mut probs = Vec::with_capacity(cfg.num_heads);
        for h in 0..cfg.num_heads {
            let cols = s![.., h * dh..(h + 1) * dh];
            let mut scores = q.slice(cols).dot(&k.slice(cols).t()) * scale;
            softmax_rows(&mut scores);
            ctx.slice_mut(cols).assign(&scores.dot(&v.slice(cols)));
            probs.push(scores);
        }
        let mut attn = linear(&ctx, &lp.wo, &lp.bo);
        let attn_drop = match dropout.as_deref_mut() {
            Some(rng) if rate > 0.0 => {
                let m = dropout_mask((n, d), rate, rng);
                attn *= &m;
                Some(m)
            }
            _ => None,
        };
        let (h1, ln1) = layer_norm(&(&x + &attn), &lp.ln1_gamma, &lp.ln1_beta);
        let z1 = linear(&h1, &lp.w1, &lp.b1);
        let act = z1.mapv(gelu);
        let mut ffn = linear(&act, &lp.w2, &lp.b2);
        let ffn_drop = match dropout.as_deref_mut() {
            Some(rng) if rate > 0.0 => {
                let m = dropout_mask((n, d), rate, rng);
                ffn *= &m;
                Some(m)
            }
            _ => None,
        };
        let (out, ln2) = layer_norm(&(&h1 + &ffn), &lp.ln2_gamma, &lp.ln2_beta);
        check_finite(&out, || format!("encoder layer {li}"))?;
        layers.push(LayerCache {
            input: std::mem::replace(&mut x, out),
            q,
            k,
            v,
            probs,
            ctx,
            attn_drop,
            ln1,
            h1,
            z1,
            act,
            ffn_drop,
            ln2,
        });
    }

    let cls = x.row(0).to_owned();
    let logit = cls.dot(&params.head_w) + params.head_b[0];
    if !logit.is_finite() {
        return Err(Error::NonFinite {
            location: "classification head".into(),
        });
    }
    Ok((
        logit,
        ForwardCache {
            token_ids,
            positions,
            emb_ln,
            emb_drop,
            layers,
            cls,
        },
    ))
}

fn linear_backward(
    dy: &Array2<f64>,
    x: &Array2<f64>,
    w: &Array2<f64>,
    dw: &mut Array2<f64>,
    db: &mut Array1<f64>,
) -> Array2<f64> {
    *dw += &x.t().dot(dy);
    *db += &dy.sum_axis(Axis(0));
    dy.dot(&w.t())
}

fn layer_backward(
    dout: Array2<f64>,
    cache: &LayerCache,
    lp: &LayerParams,
    grad: &mut LayerParams,
    num_heads: usize,
) -> Array2<f64> {
    let (n, d) = dout.dim();
    let dh = d / num_heads;
    let scale = 1.0 / (dh as f64).sqrt();

    let dr2 = layer_norm_backward(&dout, &cache.ln2, &lp.ln2_gamma, &mut grad.ln2_gamma, &mut grad.ln2_beta);
    let mut dffn = dr2.clone();
    if let Some(m) = &cache.ffn_drop {
        dffn *= m;
    }
    let mut dact = linear_backward(&dffn, &cache.act, &lp.w2, &mut grad.w2, &mut grad.b2);
    dact.zip_mut_with(&cache.z1, |g, &z| *g *= gelu_grad(z));
    let mut dh1 = linear_backward(&dact, &cache.h1, &lp.w1, &mut grad.w1, &mut grad.b1);
    dh1 += &dr2;

    let dr1 = layer_norm_backward(&dh1, &cache.ln1, &lp.ln1_gamma, &mut grad.ln1_gamma, &mut grad.ln1_beta);
    let mut dattn = dr1.clone();
    if let Some(m) = &cache.attn_drop {
        dattn *= m;
    }
    let dctx = linear_backward(&dattn, &cache.ctx, &lp.wo, &mut grad.wo, &mut grad.bo);

    let mut dq = Array2::zeros((n, d));
    let mut dk = Array2::zeros((n, d));
    let mut dv = Array2::zeros((n, d));
    for (h, p) in cache.probs.iter().enumerate() {
        let cols = s![.., h * dh..(h + 1) * dh];
        let dctx_h = dctx.slice(cols);
        let dp = dctx_h.dot(&cache.v.slice(cols).t());
        dv.slice_mut(cols).assign(&p.t().dot(&dctx_h));
        let mut ds = dp;
        for (mut drow, prow) in ds.rows_mut().into_iter().zip(p.rows()) {
            let dot: f64 = drow.iter().zip(prow.iter()).map(|(a, b)| a * b).sum();
            drow.zip_mut_with(&prow, |g, &pv| *g = pv * (*g - dot) * scale);
        }
        dq.slice_mut(cols).assign(&ds.dot(&cache.k.slice(cols)));
        dk.slice_mut(cols).assign(&ds.t().dot(&cache.q.slice(cols)));
    }
    let mut dx = dr1;
    dx += &linear_backward(&dq, &cache.input, &lp.wq, &mut grad.wq, &mut grad.bq);
    dx += &linear_backward(&dk, &cache.input, &lp.wk, &mut grad.wk, &mut grad.bk);
    dx += &linear_backward(&dv, &cache.input, &lp.wv, &mut grad.wv, &mut grad.bv);
    dx
}

/// Accumulates `dlogit * d(logit)/d(params)` into `grad`.
pub fn backward(params: &ModelParams, cache: &ForwardCache, dlogit: f64, grad: &mut ModelParams) {
    let d = params.config.hidden_dim;
    let n = cache.positions.len();

    grad.head_w.scaled_add(dlogit, &cache.cls);
    grad.head_b[0] += dlogit;

    let mut dx = Array2::zeros((n, d));
    dx.row_mut(0).scaled_add(dlogit, &params.head_w);

    for (li, lc) in cache.layers.iter().enumerate().rev() {
        dx = layer_backward(
            dx,
            lc,
            &params.layers[li],
            &mut grad.layers[li],
            params.config.num_heads,
        );
    }

    if let Some(m) = &cache.emb_drop {
        dx *= m;
    }
    let demb = layer_norm_backward(
        &dx,
        &cache.emb_ln,
        &params.emb_ln_gamma,
        &mut grad.emb_ln_gamma,
        &mut grad.emb_ln_beta,
    );
    for (r, (&tok, &pos)) in cache.token_ids.iter().zip(&cache.positions).enumerate() {
        let row: ArrayView1<f64> = demb.row(r);
        grad.tok_emb.row_mut(tok).scaled_add(1.0, &row);
        grad.pos_emb.row_mut(pos).scaled_add(1.0, &row);
    }
}
