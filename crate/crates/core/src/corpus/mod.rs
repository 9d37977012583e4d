//! Labeled text corpus: loading heterogeneous source files, binary label
//! normalization, merging with exact-duplicate removal, and seeded splits.

mod load;
mod sources;

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::hash::Hasher;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use fnv::FnvHasher;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use load::{load_source, load_source_with, LoadReport, DEFAULT_MALFORMED_TOLERANCE};
pub use sources::{
    normalize_label, FileFormat, LabelDecision, LabelTarget, SourceRegistry, SourceSpec,
    DEFAULT_SOURCE_KINDS,
};

use crate::error::{Error, Result};

/// One row as read from a source file, before label normalization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawRecord {
    pub source_id: String,
    pub text: String,
    pub original_label: String,
}

/// A document with its binary label (1 = fake, 0 = real).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledDocument {
    pub doc_id: String,
    pub text: String,
    pub label: u8,
    pub source_id: String,
}

impl LabeledDocument {
    pub fn new(text: impl Into<String>, label: u8, source_id: impl Into<String>) -> Self {
        let text = text.into();
        Self {
            doc_id: doc_id(&text),
            text,
            label,
            source_id: source_id.into(),
        }
    }
}

/// Lowercased, whitespace-collapsed text; the dedup key.
pub fn normalize_text(text: &str) -> String {
    text.split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Stable 64-bit FNV-1a hash of the normalized text, as 16 hex digits.
pub fn doc_id(text: &str) -> String {
    let mut h = FnvHasher::default();
    h.write(normalize_text(text).as_bytes());
    format!("{:016x}", h.finish())
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusCounts {
    pub fake: usize,
    pub real: usize,
    pub per_source: BTreeMap<String, usize>,
}

/// Per-source bookkeeping from [`merge_corpora_with_report`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceMergeStats {
    pub input: usize,
    pub kept: usize,
    pub dropped: usize,
    pub duplicates: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    documents: Vec<LabeledDocument>,
    counts: CorpusCounts,
}

impl Corpus {
    /// Builds a corpus, rejecting repeated doc ids.
    pub fn from_documents(documents: Vec<LabeledDocument>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(documents.len());
        let mut counts = CorpusCounts::default();
        for d in &documents {
            if d.label > 1 {
                return Err(Error::InvalidArgument(format!(
                    "document {} has non-binary label {}",
                    d.doc_id, d.label
                )));
            }
            if !seen.insert(d.doc_id.as_str()) {
                return Err(Error::InvalidArgument(format!("duplicate doc_id {}", d.doc_id)));
            }
            if d.label == 1 {
                counts.fake += 1;
            } else {
                counts.real += 1;
            }
            *counts.per_source.entry(d.source_id.clone()).or_insert(0) += 1;
        }
        Ok(Self { documents, counts })
    }

    pub fn documents(&self) -> &[LabeledDocument] {
        &self.documents
    }

    pub fn counts(&self) -> &CorpusCounts {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn texts(&self) -> Vec<&str> {
        self.documents.iter().map(|d| d.text.as_str()).collect()
    }

    /// Newline-delimited JSON, one document per line.
    pub fn to_ndjson(&self) -> String {
        let mut out = String::new();
        for d in &self.documents {
            out.push_str(&serde_json::to_string(d).expect("document serializes"));
            out.push('\n');
        }
        out
    }

    pub fn write_ndjson(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        f.write_all(self.to_ndjson().as_bytes())
            .map_err(|e| Error::io(path, e))
    }

    pub fn read_ndjson(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let f = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut docs = Vec::new();
        for line in BufReader::new(f).lines() {
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            docs.push(serde_json::from_str(&line)?);
        }
        Self::from_documents(docs)
    }
}

/// Normalizes labels, drops excluded rows and removes exact duplicates
/// (first occurrence wins) across all input lists.
pub fn merge_corpora(registry: &SourceRegistry, lists: &[Vec<RawRecord>]) -> Result<Corpus> {
    merge_corpora_with_report(registry, lists).map(|(c, _)| c)
}

pub fn merge_corpora_with_report(
    registry: &SourceRegistry,
    lists: &[Vec<RawRecord>],
) -> Result<(Corpus, BTreeMap<String, SourceMergeStats>)> {
    if lists.iter().all(Vec::is_empty) {
        return Err(Error::EmptyCorpus);
    }
    let mut stats: BTreeMap<String, SourceMergeStats> = BTreeMap::new();
    let mut seen = HashSet::new();
    let mut docs = Vec::new();
    for rec in lists.iter().flatten() {
        let entry = stats.entry(rec.source_id.clone()).or_default();
        entry.input += 1;
        let label = match registry.normalize_label(&rec.source_id, &rec.original_label)? {
            LabelDecision::Drop => {
                entry.dropped += 1;
                continue;
            }
            LabelDecision::Label(l) => l,
        };
        let doc = LabeledDocument::new(rec.text.trim(), label, rec.source_id.clone());
        if !seen.insert(doc.doc_id.clone()) {
            entry.duplicates += 1;
            continue;
        }
        entry.kept += 1;
        docs.push(doc);
    }
    if docs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Ok((Corpus::from_documents(docs)?, stats))
}

/// Validation size `floor((1 - train_fraction) * n)`.
pub fn validation_size(n: usize, train_fraction: f64) -> usize {
    // floor((1-f)n) == n - ceil(f n); the product is snapped when it sits on
    // an integer up to rounding so that e.g. 0.8 * 10 yields exactly 8.
    let t = train_fraction * n as f64;
    let nearest = t.round();
    let train = if (t - nearest).abs() < 1e-9 * n.max(1) as f64 {
        nearest
    } else {
        t.ceil()
    };
    n - (train as usize).min(n)
}

/// Seeded shuffle, then the first `n - validation_size` documents train.
pub fn split(corpus: &Corpus, train_fraction: f64, seed: u64) -> Result<(Corpus, Corpus)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "train fraction {train_fraction} outside (0, 1)"
        )));
    }
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let n = corpus.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let n_train = n - validation_size(n, train_fraction);
    let pick = |idx: &[usize]| {
        Corpus::from_documents(idx.iter().map(|&i| corpus.documents[i].clone()).collect())
    };
    Ok((pick(&order[..n_train])?, pick(&order[n_train..])?))
}

/// Source list for a corpus build.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    /// Optional alternative registry file, relative to the manifest.
    #[serde(default)]
    pub registry: Option<PathBuf>,
    #[serde(default)]
    pub malformed_tolerance: Option<f64>,
    #[serde(rename = "source")]
    pub sources: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub kind: String,
    pub path: PathBuf,
}

/// Loads every manifest entry (in parallel) and merges in manifest order.
pub fn build_from_manifest(
    manifest_path: impl AsRef<Path>,
) -> Result<(Corpus, BTreeMap<String, SourceMergeStats>)> {
    let manifest_path = manifest_path.as_ref();
    let text = fs::read_to_string(manifest_path).map_err(|e| Error::io(manifest_path, e))?;
    let manifest: Manifest = toml::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    let registry = match &manifest.registry {
        Some(p) => SourceRegistry::load(base.join(p))?,
        None => SourceRegistry::default(),
    };
    let tolerance = manifest
        .malformed_tolerance
        .unwrap_or(DEFAULT_MALFORMED_TOLERANCE);
    let lists = manifest
        .sources
        .par_iter()
        .map(|e| load_source_with(&registry, base.join(&e.path), &e.kind, tolerance).map(|r| r.records))
        .collect::<Result<Vec<_>>>()?;
    merge_corpora_with_report(&registry, &lists)
}
