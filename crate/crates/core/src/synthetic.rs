//! Synthetic data generators for demos and end-to-end checks.
//!
//! Labels in [`planted_keyword_corpus`] are fully determined by which keyword
//! set was planted in the text, so a working classifier can separate them.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Corpus, LabeledDocument};
use crate::error::Result;
use crate::propgraph::Tweet;

pub const FAKE_KEYWORDS: [&str; 8] = [
    "hoax", "rigged", "exposed", "shocking", "coverup", "deepstate", "falseflag", "banned",
];
pub const REAL_KEYWORDS: [&str; 8] = [
    "reported", "confirmed", "officials", "according", "study", "announced", "published", "statement",
];

const ONSETS: [&str; 12] = ["b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t"];
const VOWELS: [&str; 5] = ["a", "e", "i", "o", "u"];

/// Deterministic pseudo-word filler vocabulary shared by both classes.
pub fn filler_words(count: usize) -> Vec<String> {
    let mut words = Vec::with_capacity(count);
    'outer: for o1 in ONSETS {
        for v1 in VOWELS {
            for o2 in ONSETS {
                for v2 in VOWELS {
                    if words.len() == count {
                        break 'outer;
                    }
                    words.push(format!("{o1}{v1}{o2}{v2}"));
                }
            }
        }
    }
    words
}

/// `n` balanced documents of 10-20 filler words with 2-3 planted class
/// keywords each. Label 1 documents carry [`FAKE_KEYWORDS`], label 0
/// documents [`REAL_KEYWORDS`].
pub fn planted_keyword_corpus(n: usize, seed: u64) -> Result<Corpus> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let filler = filler_words(300);
    let mut labels: Vec<u8> = (0..n).map(|i| (i % 2) as u8).collect();
    labels.shuffle(&mut rng);

    let mut docs = Vec::with_capacity(n);
    for (i, label) in labels.into_iter().enumerate() {
        let keywords: &[&str] = if label == 1 { &FAKE_KEYWORDS } else { &REAL_KEYWORDS };
        let len = rng.random_range(10..=20);
        let mut words: Vec<&str> = (0..len)
            .map(|_| filler.choose(&mut rng).unwrap().as_str())
            .collect();
        for _ in 0..rng.random_range(2..=3) {
            let at = rng.random_range(0..=words.len());
            words.insert(at, keywords.choose(&mut rng).unwrap());
        }
        // The index suffix keeps texts unique so dedup never shrinks the set.
        let text = format!("{} n{i}", words.join(" "));
        docs.push(LabeledDocument::new(text, label, "synthetic"));
    }
    Corpus::from_documents(docs)
}

/// 2020-11-03T00:00:00Z.
pub const DEMO_START: i64 = 1_604_361_600;
pub const DEMO_TWEET_COUNT: usize = 500;

const DEMO_FAKE_TEXTS: [&str; 6] = [
    "the election was rigged and the hoax is exposed",
    "shocking coverup of election ballots banned from view",
    "deepstate falseflag behind the election hoax",
    "exposed: rigged machines flipped the election",
    "banned video shows shocking election coverup",
    "election night hoax rigged by the deepstate",
];
const DEMO_REAL_TEXTS: [&str; 6] = [
    "officials confirmed the election results on schedule",
    "according to a published study election turnout rose",
    "election officials announced the count in a statement",
    "reported results from the election were confirmed by officials",
    "statement published: election audit confirmed the count",
    "study reported that election lines were short according to officials",
];
const DEMO_OTHER_TEXTS: [&str; 5] = [
    "weather today is sunny with a light breeze",
    "new coffee place opened downtown",
    "highlights from last night's game",
    "traffic is slow on the bridge this morning",
    "recipe of the week: lentil soup",
];
const DEMO_FAKE_TAGS: [&str; 4] = ["stopthesteal", "riggedelection", "fraud", "breaking"];
const DEMO_REAL_TAGS: [&str; 4] = ["election2020", "vote", "factcheck", "results"];

fn demo_id(i: usize) -> String {
    (1_323_000_000_000_000_000u64 + i as u64 * 7919).to_string()
}

/// Exponential delay with the given mean, in whole seconds.
fn delay(rng: &mut ChaCha8Rng, mean: f64) -> i64 {
    let u: f64 = rng.random_range(f64::EPSILON..1.0);
    (-u.ln() * mean).round() as i64
}

/// A deterministic election-themed tweet stream of [`DEMO_TWEET_COUNT`]
/// lines: fake-styled and real-styled originals about the election,
/// off-topic originals, retweets (some of other retweets), three retweets of
/// an original that is absent from the stream and one retweet stamped
/// before its original. Lines are ordered by time.
pub fn demo_tweets(seed: u64) -> Vec<Tweet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let users: Vec<(String, u64)> = (0..80)
        .map(|i| {
            let followers = 10f64.powf(rng.random_range(1.0..5.0)).floor() as u64;
            (format!("user{i:03}"), followers)
        })
        .collect();
    let mut next_id = 0;
    let mut fresh_id = || {
        next_id += 1;
        demo_id(next_id)
    };
    let mut tweets: Vec<Tweet> = Vec::new();
    let make = |id: String, user: &(String, u64), ts: i64, text: String, tags: Vec<String>, rt: Option<String>| Tweet {
        tweet_id: id,
        user_id: user.0.clone(),
        user_followers: user.1,
        timestamp: ts,
        text,
        hashtags: tags,
        retweet_of: rt,
    };

    let mut originals = Vec::new();
    for i in 0..36 {
        let fake = i % 2 == 0;
        let (texts, tags): (&[&str], &[&str]) = if fake {
            (&DEMO_FAKE_TEXTS, &DEMO_FAKE_TAGS)
        } else {
            (&DEMO_REAL_TEXTS, &DEMO_REAL_TAGS)
        };
        let text = format!("{} (update {i})", texts.choose(&mut rng).unwrap());
        let mut chosen: Vec<String> = vec!["election".into()];
        for _ in 0..rng.random_range(0..=2) {
            chosen.push(tags.choose(&mut rng).unwrap().to_string());
        }
        chosen.dedup();
        let user = users.choose(&mut rng).unwrap();
        let ts = DEMO_START + rng.random_range(0..18 * 3600);
        originals.push(tweets.len());
        tweets.push(make(fresh_id(), user, ts, text, crate::propgraph::normalize_hashtags(&chosen), None));
    }
    for i in 0..10 {
        let user = users.choose(&mut rng).unwrap();
        let text = format!("{} #{i}", DEMO_OTHER_TEXTS[i % DEMO_OTHER_TEXTS.len()]);
        let ts = DEMO_START + rng.random_range(0..24 * 3600);
        originals.push(tweets.len());
        tweets.push(make(fresh_id(), user, ts, text, vec![], None));
    }

    let absent = make(
        fresh_id(),
        &users[0],
        DEMO_START + 2 * 3600,
        DEMO_FAKE_TEXTS[0].to_string(),
        vec!["election".into(), "fraud".into()],
        None,
    );
    for _ in 0..3 {
        let user = users.choose(&mut rng).unwrap();
        let ts = absent.timestamp + delay(&mut rng, 3600.0);
        let text = format!("RT @{}: {}", absent.user_id, absent.text);
        tweets.push(make(fresh_id(), user, ts, text, absent.hashtags.clone(), Some(absent.tweet_id.clone())));
    }
    let skew_parent = &tweets[originals[1]];
    let skewed = make(
        fresh_id(),
        &users[1],
        skew_parent.timestamp - 60,
        format!("RT @{}: {}", skew_parent.user_id, skew_parent.text),
        skew_parent.hashtags.clone(),
        Some(skew_parent.tweet_id.clone()),
    );
    tweets.push(skewed);

    let weights: Vec<f64> = (0..originals.len()).map(|r| 1.0 / (r as f64 + 1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut cascade: Vec<Vec<usize>> = vec![Vec::new(); originals.len()];
    while tweets.len() < DEMO_TWEET_COUNT {
        let mut pick = rng.random_range(0.0..total);
        let mut k = 0;
        while pick >= weights[k] && k + 1 < weights.len() {
            pick -= weights[k];
            k += 1;
        }
        let orig = &tweets[originals[k]];
        let (parent, base) = match cascade[k].choose(&mut rng) {
            Some(&r) if rng.random_bool(0.2) => (tweets[r].tweet_id.clone(), tweets[r].timestamp),
            _ => (orig.tweet_id.clone(), orig.timestamp),
        };
        let user = users.choose(&mut rng).unwrap();
        let text = format!("RT @{}: {}", orig.user_id, orig.text);
        let tags = orig.hashtags.clone();
        let ts = base + delay(&mut rng, 2.0 * 3600.0);
        cascade[k].push(tweets.len());
        tweets.push(make(fresh_id(), user, ts, text, tags, Some(parent)));
    }
    tweets.sort_by(|a, b| a.timestamp.cmp(&b.timestamp).then_with(|| a.tweet_id.cmp(&b.tweet_id)));
    tweets
}
