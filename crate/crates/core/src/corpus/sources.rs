//! Source registry: per-dataset file schemas and label tables.
//!
//! The registry is data. The default tables ship in `data/sources.toml`
//! and a replacement file can be loaded at runtime to register new sources.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const DEFAULT_SOURCES: &str = include_str!("../../data/sources.toml");

/// Kinds shipped in the default registry.
pub const DEFAULT_SOURCE_KINDS: [&str; 10] = [
    "liar",
    "isot",
    "horne_buzzfeed",
    "horne_random",
    "russian_troll",
    "fakenewsnet",
    "utk",
    "kaggle_jruvika",
    "nbc_troll",
    "viral_2016",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FileFormat {
    Csv,
    Ndjson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelTarget {
    Fake,
    Real,
    Drop,
}

/// Result of mapping a source label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelDecision {
    Label(u8),
    Drop,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceSpec {
    pub format: FileFormat,
    /// Columns joined (newline separated) to form the document text.
    pub text_fields: Vec<String>,
    #[serde(default)]
    pub label_field: Option<String>,
    /// Label applied to every row of sources without a label column.
    #[serde(default)]
    pub fixed_label: Option<String>,
    pub labels: BTreeMap<String, LabelTarget>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceRegistry {
    pub sources: BTreeMap<String, SourceSpec>,
}

impl Default for SourceRegistry {
    fn default() -> Self {
        Self::from_toml(DEFAULT_SOURCES).expect("bundled source registry is valid")
    }
}

impl SourceRegistry {
    pub fn from_toml(text: &str) -> Result<Self> {
        let reg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        for (kind, spec) in &reg.sources {
            if spec.text_fields.is_empty() {
                return Err(Error::Config(format!("source `{kind}` has no text fields")));
            }
            if spec.label_field.is_some() == spec.fixed_label.is_some() {
                return Err(Error::Config(format!(
                    "source `{kind}` needs exactly one of label_field or fixed_label"
                )));
            }
            if spec.labels.keys().any(|k| k != &normalize_key(k)) {
                return Err(Error::Config(format!(
                    "source `{kind}` label keys must be trimmed lowercase"
                )));
            }
        }
        Ok(reg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn get(&self, kind: &str) -> Result<&SourceSpec> {
        self.sources
            .get(kind)
            .ok_or_else(|| Error::UnknownSource(kind.to_string()))
    }

    pub fn kinds(&self) -> impl Iterator<Item = &str> {
        self.sources.keys().map(String::as_str)
    }

    /// Maps a verbatim source label to fake (1), real (0) or drop.
    pub fn normalize_label(&self, kind: &str, original_label: &str) -> Result<LabelDecision> {
        let spec = self.get(kind)?;
        match spec.labels.get(&normalize_key(original_label)) {
            Some(LabelTarget::Fake) => Ok(LabelDecision::Label(1)),
            Some(LabelTarget::Real) => Ok(LabelDecision::Label(0)),
            Some(LabelTarget::Drop) => Ok(LabelDecision::Drop),
            None => Err(Error::UnknownLabel {
                source_kind: kind.to_string(),
                label: original_label.to_string(),
                valid: spec.labels.keys().cloned().collect::<Vec<_>>().join(", "),
            }),
        }
    }
}

fn normalize_key(label: &str) -> String {
    label.trim().to_lowercase()
}

/// [`SourceRegistry::normalize_label`] on the default registry.
pub fn normalize_label(kind: &str, original_label: &str) -> Result<LabelDecision> {
    SourceRegistry::default().normalize_label(kind, original_label)
}
