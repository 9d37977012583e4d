#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use misinfograph::classifier::TextScorer;
use misinfograph::community::UGraph;
use misinfograph::propgraph::{parse_tweets, tweets_to_ndjson, Tweet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn crate_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(rel)
}

pub fn tweet(id: &str, user: &str, ts: i64, text: &str, tags: &[&str], rt: Option<&str>) -> Tweet {
    Tweet {
        tweet_id: id.into(),
        user_id: user.into(),
        user_followers: 10,
        timestamp: ts,
        text: text.into(),
        hashtags: tags.iter().map(|t| t.to_string()).collect(),
        retweet_of: rt.map(Into::into),
    }
}

/// A random tweet stream whose retweets may point at earlier retweets.
pub struct Cascade {
    /// Tweets as generated, before chain resolution.
    pub raw: Vec<Tweet>,
    /// Root original of every retweet, found by walking the raw chain.
    pub root: HashMap<String, String>,
}

impl Cascade {
    pub fn ndjson(&self) -> String {
        tweets_to_ndjson(&self.raw)
    }

    pub fn parsed(&self) -> Vec<Tweet> {
        parse_tweets(&self.ndjson()).expect("generated cascade parses")
    }
}

const TAGS: [&str; 5] = ["alpha", "beta", "gamma", "delta", "omega"];

/// `originals` originals and `retweets` retweets; each retweet targets an
/// earlier retweet with probability `chain_prob`, otherwise an original.
/// Retweets are never earlier than what they point at. Every tweet contains
/// the word "topic".
pub fn random_cascade(seed: u64, originals: usize, retweets: usize, chain_prob: f64) -> Cascade {
    let mut r = rng(seed);
    let mut raw = Vec::new();
    let mut root = HashMap::new();
    let mut ts_of: HashMap<String, i64> = HashMap::new();
    let users = (originals + retweets).div_ceil(3).max(2);
    for i in 0..originals {
        let id = format!("o{i}");
        let ts = 1_000 + r.random_range(0..5_000);
        let k = r.random_range(0..=2);
        let tags: Vec<&str> = (0..k).map(|_| TAGS[r.random_range(0..TAGS.len())]).collect();
        let mut t = tweet(&id, &format!("u{}", r.random_range(0..users)), ts, "a topic post", &tags, None);
        t.hashtags.dedup();
        t.user_followers = r.random_range(0..10_000);
        ts_of.insert(id, ts);
        raw.push(t);
    }
    let mut retweet_ids: Vec<String> = Vec::new();
    for j in 0..retweets {
        if originals == 0 {
            break;
        }
        let id = format!("r{j}");
        let parent = if !retweet_ids.is_empty() && r.random_bool(chain_prob) {
            retweet_ids[r.random_range(0..retweet_ids.len())].clone()
        } else {
            format!("o{}", r.random_range(0..originals))
        };
        let ts = ts_of[&parent] + r.random_range(0..20_000);
        let top = root.get(&parent).cloned().unwrap_or_else(|| parent.clone());
        let t = tweet(&id, &format!("u{}", r.random_range(0..users)), ts, "RT a topic post", &[], Some(&parent));
        root.insert(id.clone(), top);
        ts_of.insert(id.clone(), ts);
        retweet_ids.push(id);
        raw.push(t);
    }
    // Interleave by time so retweets may precede their parent in the file.
    raw.sort_by(|a, b| a.timestamp.cmp(&b.timestamp).then(a.tweet_id.cmp(&b.tweet_id)));
    Cascade { raw, root }
}

/// Random simple graph with integer weights in `1..=max_w`.
pub fn random_graph(seed: u64, n: usize, p: f64, max_w: u32) -> Vec<(usize, usize, f64)> {
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.random_bool(p) {
                edges.push((u, v, r.random_range(1..=max_w) as f64));
            }
        }
    }
    edges
}

/// Every set partition of `0..n` as restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, cur: &mut Vec<usize>, used: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for c in 0..=used {
            cur.push(c);
            rec(n, cur, used.max(c + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), 0, &mut out);
    out
}

pub fn adjacency(n: usize, edges: &[(usize, usize, f64)]) -> Vec<Vec<f64>> {
    let mut a = vec![vec![0.0; n]; n];
    for &(u, v, w) in edges {
        a[u][v] += w;
        a[v][u] += w;
    }
    a
}

/// `Q = 1/2m Σ_ij [A_ij - k_i k_j / 2m] δ(c_i, c_j)`.
pub fn modularity_oracle(n: usize, edges: &[(usize, usize, f64)], c: &[usize]) -> f64 {
    let a = adjacency(n, edges);
    let k: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let two_m: f64 = k.iter().sum();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if c[i] == c[j] {
                q += a[i][j] - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

fn entropy(weights: &[f64]) -> f64 {
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    weights
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| {
            let p = w / total;
            -p * p.log2()
        })
        .sum()
}

/// Map equation from its codebook form:
/// `L = q·H(Q) + Σ_i p_i↻·H(P_i)`.
pub fn map_equation_oracle(n: usize, edges: &[(usize, usize, f64)], c: &[usize]) -> f64 {
    let a = adjacency(n, edges);
    let two_m: f64 = a.iter().flatten().sum();
    let p: Vec<f64> = a.iter().map(|row| row.iter().sum::<f64>() / two_m).collect();
    let modules = c.iter().max().map_or(0, |m| m + 1);
    let mut exit = vec![0.0; modules];
    for i in 0..n {
        for j in 0..n {
            if c[i] != c[j] {
                exit[c[i]] += a[i][j] / two_m;
            }
        }
    }
    let q: f64 = exit.iter().sum();
    let mut l = q * entropy(&exit);
    for m in 0..modules {
        let mut book = vec![exit[m]];
        book.extend((0..n).filter(|&i| c[i] == m).map(|i| p[i]));
        let rate: f64 = book.iter().sum();
        l += rate * entropy(&book);
    }
    l
}

/// Two 4-cliques `{0..3}` and `{4..7}` joined by the edge 3-4.
pub fn two_cliques() -> UGraph {
    let mut edges = Vec::new();
    for base in [0, 4] {
        for u in base..base + 4 {
            for v in u + 1..base + 4 {
                edges.push((u, v, 1.0));
            }
        }
    }
    edges.push((3, 4, 1.0));
    UGraph::new(8, edges).unwrap()
}

pub fn two_triangles_edges() -> Vec<(usize, usize, f64)> {
    vec![(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0)]
}

pub fn same_partition(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len()
        && (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] == a[j]) == (b[i] == b[j])))
}

/// Brute-force confusion counts `(tp, fp, tn, fn)` with fake = 1 positive.
pub fn confusion_oracle(scores: &[f64], labels: &[u8], threshold: f64) -> (u64, u64, u64, u64) {
    let mut out = (0, 0, 0, 0);
    for (s, &y) in scores.iter().zip(labels) {
        let predicted_fake = !(*s < threshold);
        match (predicted_fake, y == 1) {
            (true, true) => out.0 += 1,
            (true, false) => out.1 += 1,
            (false, false) => out.2 += 1,
            (false, true) => out.3 += 1,
        }
    }
    out
}

/// Scores "fake" when the text contains a marker word.
pub struct MarkerScorer {
    pub marker: &'static str,
}

impl TextScorer for MarkerScorer {
    fn logit(&self, text: &str) -> misinfograph::Result<f64> {
        Ok(if text.split_whitespace().any(|w| w == self.marker) { 2.0 } else { -2.0 })
    }
}

/// Logit derived from a hash of the text: arbitrary but deterministic.
pub struct HashScorer;

impl TextScorer for HashScorer {
    fn logit(&self, text: &str) -> misinfograph::Result<f64> {
        let h = text.bytes().fold(1469598103934665603u64, |h, b| (h ^ b as u64).wrapping_mul(1099511628211));
        Ok((h % 2001) as f64 / 250.0 - 4.0)
    }
}

pub mod gradcheck {
    use misinfograph::classifier::{batch_gradient, bce_with_logits, forward, Example, ModelConfig, ModelParams};
    use misinfograph::tokenizer::TokenSequence;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    pub const STEP: f64 = 1e-4;
    pub const FLOOR: f64 = 1e-7;

    /// 1 layer, hidden 8, 1 head, vocab 20, no dropout.
    pub fn toy_config() -> ModelConfig {
        ModelConfig {
            num_layers: 1,
            hidden_dim: 8,
            num_heads: 1,
            ffn_dim: 16,
            max_seq_len: 8,
            vocab_size: 20,
            dropout_rate: 0.0,
        }
    }

    fn padded(ids: &[u32], max: usize) -> TokenSequence {
        let mut s = TokenSequence {
            ids: ids.to_vec(),
            attention_mask: vec![1; ids.len()],
            true_length: ids.len(),
        };
        s.ids.resize(max, 0);
        s.attention_mask.resize(max, 0);
        s
    }

    pub struct Report {
        pub checked: usize,
        pub worst: f64,
        pub worst_at: String,
    }

    /// Central differences against the analytic gradient of the mean loss of
    /// four random sequences, at initial weights plus N(0, 0.3²) noise.
    pub fn run(seed: u64) -> Report {
        let cfg = toy_config();
        let mut params = ModelParams::init(&cfg, seed).unwrap();
        let mut r = ChaCha8Rng::seed_from_u64(1_000 + seed);
        let noise = Normal::new(0.0, 0.3).unwrap();
        for (_, t) in params.tensors_mut() {
            for x in t.iter_mut() {
                *x += noise.sample(&mut r);
            }
        }
        let examples: Vec<Example> = (0..4)
            .map(|i| {
                let len = r.random_range(1..=cfg.max_seq_len - 2);
                let mut ids = vec![2u32];
                ids.extend((0..len).map(|_| r.random_range(4..cfg.vocab_size as u32)));
                ids.push(3);
                Example {
                    seq: padded(&ids, cfg.max_seq_len),
                    label: (i % 2) as u8,
                }
            })
            .collect();
        let batch: Vec<&Example> = examples.iter().collect();
        let (_, grad) = batch_gradient(&params, &batch, None).unwrap();
        let loss = |p: &ModelParams| {
            batch.iter().map(|e| bce_with_logits(forward(p, &e.seq).unwrap(), e.label)).sum::<f64>() / batch.len() as f64
        };
        let analytic = grad.tensors();
        let mut report = Report {
            checked: 0,
            worst: 0.0,
            worst_at: String::new(),
        };
        for (ti, (name, values)) in analytic.iter().enumerate() {
            for i in 0..values.len() {
                let mut p = params.clone();
                p.tensors_mut()[ti].1[i] += STEP;
                let up = loss(&p);
                p.tensors_mut()[ti].1[i] -= 2.0 * STEP;
                let down = loss(&p);
                let numeric = (up - down) / (2.0 * STEP);
                let a = values[i];
                let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(FLOOR);
                report.checked += 1;
                if rel > report.worst {
                    report.worst = rel;
                    report.worst_at = format!("{name}[{i}]");
                }
            }
        }
        report
    }
}

/// Default proptest settings with failures persisted next to the test file.
pub fn proptest_config() -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        failure_persistence: Some(Box::new(proptest::test_runner::FileFailurePersistence::WithSource("regressions"))),
        ..proptest::test_runner::Config::default()
    }
}

/// Errors from validating `doc` against the shipped explorer schema.
pub fn schema_errors(doc: &serde_json::Value) -> Vec<String> {
    let text = std::fs::read_to_string(crate_path("docs/explorer.schema.json")).unwrap();
    let schema: serde_json::Value = serde_json::from_str(&text).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    validator.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path())).collect()
}
