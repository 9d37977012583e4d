mod common;

use std::collections::HashSet;

use misinfograph::corpus::{
    build_from_manifest, load_source, merge_corpora, normalize_label, normalize_text, split, validation_size,
    Corpus, LabelDecision, LabeledDocument, RawRecord, SourceRegistry, DEFAULT_SOURCE_KINDS,
};
use proptest::prelude::*;

#[test]
fn liar_fixture_maps_all_six_labels() {
    let report = load_source(common::crate_path("data/sources/liar.csv"), "liar").unwrap();
    let seen: HashSet<String> = report.records.iter().map(|r| r.original_label.to_lowercase()).collect();
    for label in ["true", "mostly-true", "half-true", "barely-true", "false", "pants-on-fire"] {
        assert!(seen.contains(label), "fixture lacks {label}");
    }
    for r in &report.records {
        let expected = match r.original_label.trim().to_lowercase().as_str() {
            "true" | "mostly-true" => LabelDecision::Label(0),
            "false" | "pants-on-fire" => LabelDecision::Label(1),
            "half-true" | "barely-true" => LabelDecision::Drop,
            other => panic!("unexpected label {other}"),
        };
        assert_eq!(normalize_label("liar", &r.original_label).unwrap(), expected);
    }
}

#[test]
fn unknown_label_is_an_error() {
    assert!(normalize_label("liar", "sort-of-true").is_err());
    assert!(normalize_label("no_such_source", "true").is_err());
}

#[test]
fn default_registry_covers_shipped_kinds() {
    let reg = SourceRegistry::default();
    let kinds: Vec<&str> = reg.kinds().collect();
    for k in DEFAULT_SOURCE_KINDS {
        assert!(kinds.contains(&k), "{k} missing");
    }
}

#[test]
fn bundled_manifest_builds() {
    let (corpus, stats) = build_from_manifest(common::crate_path("data/sources/manifest.toml")).unwrap();
    assert_eq!(stats.len(), DEFAULT_SOURCE_KINDS.len());
    let kept: usize = stats.values().map(|s| s.kept).sum();
    assert_eq!(kept, corpus.len());
    assert_eq!(corpus.counts().fake + corpus.counts().real, corpus.len());
    assert!(corpus.documents().iter().all(|d| d.label <= 1 && !d.text.trim().is_empty()));
}

#[test]
fn large_corpus_split_size() {
    assert_eq!(validation_size(98_532, 0.8), 19_706);
}

#[test]
fn ndjson_round_trip() {
    let docs = vec![
        LabeledDocument::new("first text", 1, "liar"),
        LabeledDocument::new("second \"quoted\" text\nwith newline", 0, "isot"),
    ];
    let corpus = Corpus::from_documents(docs).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.ndjson");
    corpus.write_ndjson(&path).unwrap();
    assert_eq!(Corpus::read_ndjson(&path).unwrap(), corpus);
}

fn raw(text: &str, label: &str) -> RawRecord {
    RawRecord {
        source_id: "isot".into(),
        text: text.into(),
        original_label: label.into(),
    }
}

proptest! {
    #![proptest_config(common::proptest_config())]

    #[test]
    fn validation_size_is_floor(n in 0usize..200_000, pct in 1u32..100) {
        let f = pct as f64 / 100.0;
        let expected = n * (100 - pct as usize) / 100;
        prop_assert_eq!(validation_size(n, f), expected);
    }

    #[test]
    fn split_partitions_the_corpus(n in 2usize..300, pct in 5u32..96, seed in any::<u64>()) {
        let docs: Vec<LabeledDocument> =
            (0..n).map(|i| LabeledDocument::new(format!("doc number {i}"), (i % 2) as u8, "isot")).collect();
        let corpus = Corpus::from_documents(docs).unwrap();
        let f = pct as f64 / 100.0;
        let (train, val) = split(&corpus, f, seed).unwrap();
        prop_assert_eq!(val.len(), validation_size(n, f));
        prop_assert_eq!(train.len() + val.len(), n);
        let a: HashSet<&str> = train.documents().iter().map(|d| d.doc_id.as_str()).collect();
        let b: HashSet<&str> = val.documents().iter().map(|d| d.doc_id.as_str()).collect();
        prop_assert!(a.is_disjoint(&b));
        let all: HashSet<&str> = corpus.documents().iter().map(|d| d.doc_id.as_str()).collect();
        prop_assert_eq!(a.union(&b).copied().collect::<HashSet<_>>(), all);
        let (train2, val2) = split(&corpus, f, seed).unwrap();
        prop_assert_eq!(train2, train);
        prop_assert_eq!(val2, val);
    }

    #[test]
    fn merge_keeps_first_of_each_normalized_text(
        picks in prop::collection::vec((0usize..6, any::<bool>(), any::<bool>()), 1..40)
    ) {
        let bases = ["Alpha beta", "gamma  delta", "Epsilon", "zeta eta theta", "iota", "kappa lambda"];
        let records: Vec<RawRecord> = picks
            .iter()
            .map(|&(i, upper, fake)| {
                let text = if upper { bases[i].to_uppercase() } else { format!(" {} ", bases[i].replace(' ', "\t ")) };
                raw(&text, if fake { "fake" } else { "true" })
            })
            .collect();
        let corpus = merge_corpora(&SourceRegistry::default(), &[records.clone()]).unwrap();
        let mut seen = HashSet::new();
        let expected: Vec<(String, u8)> = records
            .iter()
            .filter(|r| seen.insert(normalize_text(&r.text)))
            .map(|r| (normalize_text(&r.text), u8::from(r.original_label == "fake")))
            .collect();
        let got: Vec<(String, u8)> =
            corpus.documents().iter().map(|d| (normalize_text(&d.text), d.label)).collect();
        prop_assert_eq!(got, expected);
    }
}
