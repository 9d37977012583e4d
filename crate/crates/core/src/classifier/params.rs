use ndarray::{Array1, Array2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::config::ModelConfig;
use crate::error::Result;

/// Standard deviation of the Gaussian weight initializer.
pub const INIT_STD: f64 = 0.02;

#[derive(Debug, Clone, PartialEq)]
pub struct LayerParams {
    pub wq: Array2<f64>,
    pub bq: Array1<f64>,
    pub wk: Array2<f64>,
    pub bk: Array1<f64>,
    pub wv: Array2<f64>,
    pub bv: Array1<f64>,
    pub wo: Array2<f64>,
    pub bo: Array1<f64>,
    pub ln1_gamma: Array1<f64>,
    pub ln1_beta: Array1<f64>,
    pub w1: Array2<f64>,
    pub b1: Array1<f64>,
    pub w2: Array2<f64>,
    pub b2: Array1<f64>,
    pub ln2_gamma: Array1<f64>,
    pub ln2_beta: Array1<f64>,
}

/// Encoder weights. Linear maps are stored input-major (`x.dot(w)`).
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub config: ModelConfig,
    pub tok_emb: Array2<f64>,
    pub pos_emb: Array2<f64>,
    pub emb_ln_gamma: Array1<f64>,
    pub emb_ln_beta: Array1<f64>,
    pub layers: Vec<LayerParams>,
    pub head_w: Array1<f64>,
    pub head_b: Array1<f64>,
}

impl LayerParams {
    fn zeros(cfg: &ModelConfig) -> Self {
        let (d, f) = (cfg.hidden_dim, cfg.ffn_dim);
        Self {
            wq: Array2::zeros((d, d)),
            bq: Array1::zeros(d),
            wk: Array2::zeros((d, d)),
            bk: Array1::zeros(d),
            wv: Array2::zeros((d, d)),
            bv: Array1::zeros(d),
            wo: Array2::zeros((d, d)),
            bo: Array1::zeros(d),
            ln1_gamma: Array1::zeros(d),
            ln1_beta: Array1::zeros(d),
            w1: Array2::zeros((d, f)),
            b1: Array1::zeros(f),
            w2: Array2::zeros((f, d)),
            b2: Array1::zeros(d),
            ln2_gamma: Array1::zeros(d),
            ln2_beta: Array1::zeros(d),
        }
    }
}

macro_rules! layer_tensors {
    ($layer:expr, $as_slice:ident) => {
        [
            ("wq", $layer.wq.$as_slice()),
            ("bq", $layer.bq.$as_slice()),
            ("wk", $layer.wk.$as_slice()),
            ("bk", $layer.bk.$as_slice()),
            ("wv", $layer.wv.$as_slice()),
            ("bv", $layer.bv.$as_slice()),
            ("wo", $layer.wo.$as_slice()),
            ("bo", $layer.bo.$as_slice()),
            ("ln1_gamma", $layer.ln1_gamma.$as_slice()),
            ("ln1_beta", $layer.ln1_beta.$as_slice()),
            ("w1", $layer.w1.$as_slice()),
            ("b1", $layer.b1.$as_slice()),
            ("w2", $layer.w2.$as_slice()),
            ("b2", $layer.b2.$as_slice()),
            ("ln2_gamma", $layer.ln2_gamma.$as_slice()),
            ("ln2_beta", $layer.ln2_beta.$as_slice()),
        ]
    };
}

impl ModelParams {
    /// All-zero tensors with the shapes implied by `config`. Also used as a
    /// gradient accumulator and for optimizer moments.
    pub fn zeros(config: &ModelConfig) -> Self {
        let d = config.hidden_dim;
        Self {
            config: config.clone(),
            tok_emb: Array2::zeros((config.vocab_size, d)),
            pos_emb: Array2::zeros((config.max_seq_len, d)),
            emb_ln_gamma: Array1::zeros(d),
            emb_ln_beta: Array1::zeros(d),
            layers: (0..config.num_layers).map(|_| LayerParams::zeros(config)).collect(),
            head_w: Array1::zeros(d),
            head_b: Array1::zeros(1),
        }
    }

    /// Gaussian(0, 0.02) weights, zero biases, unit layer-norm scales.
    pub fn init(config: &ModelConfig, seed: u64) -> Result<Self> {
        config.validate()?;
        let mut p = Self::zeros(config);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, INIT_STD).expect("valid std");
        let mut fill = |a: &mut [f64]| a.iter_mut().for_each(|x| *x = normal.sample(&mut rng));

        fill(p.tok_emb.as_slice_mut().unwrap());
        fill(p.pos_emb.as_slice_mut().unwrap());
        p.emb_ln_gamma.fill(1.0);
        for layer in &mut p.layers {
            fill(layer.wq.as_slice_mut().unwrap());
            fill(layer.wk.as_slice_mut().unwrap());
            fill(layer.wv.as_slice_mut().unwrap());
            fill(layer.wo.as_slice_mut().unwrap());
            fill(layer.w1.as_slice_mut().unwrap());
            fill(layer.w2.as_slice_mut().unwrap());
            layer.ln1_gamma.fill(1.0);
            layer.ln2_gamma.fill(1.0);
        }
        fill(p.head_w.as_slice_mut().unwrap());
        Ok(p)
    }

    /// Named tensors in checkpoint order.
    pub fn tensors(&self) -> Vec<(String, &[f64])> {
        let mut out: Vec<(String, &[f64])> = vec![
            ("tok_emb".into(), self.tok_emb.as_slice().unwrap()),
            ("pos_emb".into(), self.pos_emb.as_slice().unwrap()),
            ("emb_ln_gamma".into(), self.emb_ln_gamma.as_slice().unwrap()),
            ("emb_ln_beta".into(), self.emb_ln_beta.as_slice().unwrap()),
        ];
        for (i, layer) in self.layers.iter().enumerate() {
            for (name, t) in layer_tensors!(layer, as_slice) {
                out.push((format!("layer{i}.{name}"), t.unwrap()));
            }
        }
        out.push(("head_w".into(), self.head_w.as_slice().unwrap()));
        out.push(("head_b".into(), self.head_b.as_slice().unwrap()));
        out
    }

    pub fn tensors_mut(&mut self) -> Vec<(String, &mut [f64])> {
        let mut out: Vec<(String, &mut [f64])> = vec![
            ("tok_emb".into(), self.tok_emb.as_slice_mut().unwrap()),
            ("pos_emb".into(), self.pos_emb.as_slice_mut().unwrap()),
            ("emb_ln_gamma".into(), self.emb_ln_gamma.as_slice_mut().unwrap()),
            ("emb_ln_beta".into(), self.emb_ln_beta.as_slice_mut().unwrap()),
        ];
        for (i, layer) in self.layers.iter_mut().enumerate() {
            for (name, t) in layer_tensors!(layer, as_slice_mut) {
                out.push((format!("layer{i}.{name}"), t.unwrap()));
            }
        }
        out.push(("head_w".into(), self.head_w.as_slice_mut().unwrap()));
        out.push(("head_b".into(), self.head_b.as_slice_mut().unwrap()));
        out
    }

    pub fn num_params(&self) -> usize {
        self.tensors().iter().map(|(_, t)| t.len()).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.tensors().iter().all(|(_, t)| t.iter().all(|x| x.is_finite()))
    }

    /// Elementwise `self += scale * other`.
    pub fn add_scaled(&mut self, other: &ModelParams, scale: f64) {
        for ((_, dst), (_, src)) in self.tensors_mut().into_iter().zip(other.tensors()) {
            dst.iter_mut().zip(src).for_each(|(d, s)| *d += scale * s);
        }
    }

    pub fn scale(&mut self, factor: f64) {
        for (_, t) in self.tensors_mut() {
            t.iter_mut().for_each(|x| *x *= factor);
        }
    }

    pub fn l2_norm(&self) -> f64 {
        self.tensors()
            .iter()
            .flat_map(|(_, t)| t.iter())
            .map(|x| x * x)
            .sum::<f64>()
            .sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> ModelConfig {
        ModelConfig {
            num_layers: 1,
            hidden_dim: 8,
            num_heads: 2,
            ffn_dim: 16,
            max_seq_len: 6,
            vocab_size: 20,
            dropout_rate: 0.0,
        }
    }

    #[test]
    fn init_is_seeded() {
        let a = ModelParams::init(&tiny(), 7).unwrap();
        let b = ModelParams::init(&tiny(), 7).unwrap();
        let c = ModelParams::init(&tiny(), 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.tok_emb, c.tok_emb);
    }

    #[test]
    fn layer_norm_scales_start_at_one() {
        let p = ModelParams::init(&ModelConfig::default(), 1).unwrap();
        assert!(p.emb_ln_gamma.iter().all(|&g| g == 1.0));
        for l in &p.layers {
            assert!(l.ln1_gamma.iter().all(|&g| g == 1.0));
            assert!(l.ln2_gamma.iter().all(|&g| g == 1.0));
            assert!(l.ln1_beta.iter().all(|&b| b == 0.0));
        }
    }

    #[test]
    fn init_std_is_roughly_right() {
        let p = ModelParams::init(&ModelConfig::default(), 3).unwrap();
        let xs = p.tok_emb.as_slice().unwrap();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64;
        assert!(mean.abs() < 1e-3);
        assert!((var.sqrt() - INIT_STD).abs() < 1e-3);
    }

    #[test]
    fn tensor_order_is_stable() {
        let p = ModelParams::zeros(&tiny());
        let names: Vec<String> = p.tensors().into_iter().map(|(n, _)| n).collect();
        assert_eq!(names.first().unwrap(), "tok_emb");
        assert_eq!(names[4], "layer0.wq");
        assert_eq!(names.last().unwrap(), "head_b");
        assert_eq!(names.len(), 4 + 16 + 2);
    }
}
