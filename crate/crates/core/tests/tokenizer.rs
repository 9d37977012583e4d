mod common;

use misinfograph::tokenizer::{
    basic_split, encode, encode_text, tokenize, train_vocab, wordpiece, Vocab, CLS, CONTINUATION, PAD, SEP, UNK,
};
use proptest::prelude::*;

fn small_vocab() -> Vocab {
    Vocab::from_tokens(
        [PAD, UNK, CLS, SEP, "un", "##aff", "##able", "aff", "able", "the", "cat", "##s", ",", "!"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
    )
    .unwrap()
}

#[test]
fn greedy_longest_match() {
    let v = small_vocab();
    assert_eq!(wordpiece(&v, "unaffable").unwrap(), vec!["un", "##aff", "##able"]);
    assert_eq!(wordpiece(&v, "cats").unwrap(), vec!["cat", "##s"]);
    assert!(wordpiece(&v, "dog").is_none());
    assert_eq!(tokenize(&v, "The CATS, unaffable dog!"), vec!["the", "cat", "##s", ",", "un", "##aff", "##able", "[UNK]", "!"]);
}

#[test]
fn punctuation_and_unicode() {
    assert_eq!(basic_split("Hello,world!  Café—ok"), vec!["hello", ",", "world", "!", "café", "—", "ok"]);
    assert_eq!(basic_split("«quote»"), vec!["«", "quote", "»"]);
}

#[test]
fn special_ids_follow_names() {
    let v = Vocab::from_tokens(["a", SEP, PAD, "b", CLS, UNK].iter().map(|s| s.to_string()).collect()).unwrap();
    assert_eq!((v.pad_id(), v.unk_id(), v.cls_id(), v.sep_id()), (2, 5, 4, 1));
    let s = encode_text(&v, "a b z", 8).unwrap();
    assert_eq!(s.ids, vec![4, 0, 3, 5, 1, 2, 2, 2]);
}

#[test]
fn vocab_file_round_trip() {
    let v = train_vocab(&["the cat sat on the mat", "the dog sat"], 60).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("vocab.txt");
    v.save(&path).unwrap();
    let back = Vocab::load(&path).unwrap();
    assert_eq!(back.tokens(), v.tokens());
    assert_eq!(back.fingerprint(), v.fingerprint());
}

#[test]
fn induced_vocab_reserves_specials_and_respects_size() {
    let v = train_vocab(&["aaa bbb aaa ccc", "abc abc abc"], 20).unwrap();
    assert!(v.len() <= 20);
    assert_eq!(&v.tokens()[..4], &[PAD, UNK, CLS, SEP]);
    assert!(train_vocab(&["x"], 3).is_err());
}

proptest! {
    #![proptest_config(common::proptest_config())]

    #[test]
    fn encoding_shape(text in "[a-z ,.!]{0,80}", max_len in 3usize..40) {
        let v = train_vocab(&["the quick brown fox jumps over the lazy dog, again!"], 80).unwrap();
        let s = encode_text(&v, &text, max_len).unwrap();
        prop_assert_eq!(s.ids.len(), max_len);
        prop_assert_eq!(s.attention_mask.len(), max_len);
        prop_assert!(s.true_length >= 2 && s.true_length <= max_len);
        prop_assert_eq!(s.ids[0], v.cls_id());
        prop_assert_eq!(s.ids[s.true_length - 1], v.sep_id());
        for i in 0..max_len {
            prop_assert_eq!(s.attention_mask[i] == 1, i < s.true_length);
            if i >= s.true_length {
                prop_assert_eq!(s.ids[i], v.pad_id());
            }
            prop_assert!((s.ids[i] as usize) < v.len());
        }
        let pieces = tokenize(&v, &text);
        prop_assert_eq!(s.true_length, pieces.len().min(max_len - 2) + 2);
    }

    #[test]
    fn pieces_reassemble_each_word(words in prop::collection::vec("[a-z]{1,12}", 1..10)) {
        let corpus = words.join(" ");
        let v = train_vocab(&[corpus.as_str()], 40).unwrap();
        for w in &words {
            let pieces = wordpiece(&v, w).expect("alphabet is covered");
            let joined: String = pieces
                .iter()
                .enumerate()
                .map(|(i, p)| if i == 0 { p.as_str() } else { p.strip_prefix(CONTINUATION).unwrap() })
                .collect();
            prop_assert_eq!(&joined, w);
            prop_assert!(!pieces[0].starts_with(CONTINUATION));
        }
    }

    #[test]
    fn lowercasing_is_idempotent(text in "\\PC{0,40}") {
        let v = train_vocab(&["some words here"], 30).unwrap();
        prop_assert_eq!(tokenize(&v, &text), tokenize(&v, &text.to_lowercase()));
    }

    #[test]
    fn encode_truncates_long_input(n in 0usize..100, max_len in 3usize..20) {
        let v = small_vocab();
        let tokens: Vec<String> = (0..n).map(|_| "cat".to_string()).collect();
        let s = encode(&v, &tokens, max_len).unwrap();
        prop_assert_eq!(s.true_length, n.min(max_len - 2) + 2);
    }
}
