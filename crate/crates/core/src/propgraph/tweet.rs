use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;

use chrono::DateTime;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// A tweet or retweet. `retweet_of` always names the original tweet, never
/// another retweet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tweet {
    pub tweet_id: String,
    pub user_id: String,
    pub user_followers: u64,
    /// Seconds since the Unix epoch, UTC.
    pub timestamp: i64,
    pub text: String,
    /// Lowercase, without '#', deduplicated in first-seen order.
    pub hashtags: Vec<String>,
    pub retweet_of: Option<String>,
}

impl Tweet {
    pub fn is_retweet(&self) -> bool {
        self.retweet_of.is_some()
    }
}

/// Lowercases, strips leading '#', drops empties and repeats.
pub fn normalize_hashtags<S: AsRef<str>>(tags: &[S]) -> Vec<String> {
    let mut seen = HashSet::new();
    tags.iter()
        .map(|t| t.as_ref().trim().trim_start_matches('#').to_lowercase())
        .filter(|t| !t.is_empty() && seen.insert(t.clone()))
        .collect()
}

fn id_field(obj: &serde_json::Map<String, Value>, key: &str) -> std::result::Result<Option<String>, String> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) if !s.trim().is_empty() => Ok(Some(s.trim().to_string())),
        Some(Value::Number(n)) => Ok(Some(n.to_string())),
        Some(other) => Err(format!("field `{key}` has unsupported value {other}")),
    }
}

fn parse_line(line: &str) -> std::result::Result<Tweet, String> {
    let value: Value = serde_json::from_str(line).map_err(|e| format!("invalid JSON: {e}"))?;
    let obj = value.as_object().ok_or("line is not a JSON object")?;
    let tweet_id = id_field(obj, "id")?.ok_or("missing field `id`")?;
    let user_id = id_field(obj, "user_id")?.ok_or("missing field `user_id`")?;
    let user_followers = match obj.get("user_followers") {
        Some(Value::Number(n)) => n
            .as_u64()
            .ok_or("field `user_followers` must be a non-negative integer")?,
        None | Some(Value::Null) => return Err("missing field `user_followers`".into()),
        Some(_) => return Err("field `user_followers` must be a non-negative integer".into()),
    };
    let timestamp = match obj.get("created_at") {
        Some(Value::String(s)) => DateTime::parse_from_rfc3339(s.trim())
            .map_err(|e| format!("bad `created_at` {s:?}: {e}"))?
            .timestamp(),
        None | Some(Value::Null) => return Err("timestamp missing (`created_at`)".into()),
        Some(_) => return Err("field `created_at` must be an ISO-8601 string".into()),
    };
    let text = match obj.get("text") {
        Some(Value::String(s)) => s.clone(),
        None | Some(Value::Null) => String::new(),
        Some(_) => return Err("field `text` must be a string".into()),
    };
    let hashtags = match obj.get("hashtags") {
        None | Some(Value::Null) => Vec::new(),
        Some(Value::Array(items)) => {
            let tags = items
                .iter()
                .map(|v| v.as_str().ok_or("hashtags must be strings"))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            normalize_hashtags(&tags)
        }
        Some(_) => return Err("field `hashtags` must be an array".into()),
    };
    let retweet_of = id_field(obj, "retweeted_status_id")?;
    if retweet_of.as_deref() == Some(tweet_id.as_str()) {
        return Err(format!("tweet {tweet_id} retweets itself"));
    }
    Ok(Tweet {
        tweet_id,
        user_id,
        user_followers,
        timestamp,
        text,
        hashtags,
        retweet_of,
    })
}

/// Parses newline-delimited JSON tweets. Blank lines are ignored; errors
/// carry the 1-based line number. Retweet-of-retweet references are
/// re-pointed to the ultimate original present in the input.
pub fn parse_tweets(input: &str) -> Result<Vec<Tweet>> {
    let mut tweets = Vec::new();
    let mut lines_of: HashMap<String, usize> = HashMap::new();
    for (i, line) in input.lines().enumerate() {
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let tweet = parse_line(line).map_err(|message| Error::TweetParse { line: lineno, message })?;
        if let Some(first) = lines_of.insert(tweet.tweet_id.clone(), lineno) {
            return Err(Error::TweetParse {
                line: lineno,
                message: format!("duplicate tweet id {} (first seen on line {first})", tweet.tweet_id),
            });
        }
        tweets.push(tweet);
    }
    resolve_retweet_chains(&mut tweets, &lines_of)?;
    Ok(tweets)
}

pub fn read_tweets(path: impl AsRef<Path>) -> Result<Vec<Tweet>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_tweets(&text)
}

fn resolve_retweet_chains(tweets: &mut [Tweet], lines_of: &HashMap<String, usize>) -> Result<()> {
    let parent: HashMap<String, Option<String>> = tweets
        .iter()
        .map(|t| (t.tweet_id.clone(), t.retweet_of.clone()))
        .collect();
    for t in tweets.iter_mut() {
        let Some(mut target) = t.retweet_of.clone() else {
            continue;
        };
        let mut steps = 0;
        while let Some(Some(next)) = parent.get(&target) {
            target = next.clone();
            steps += 1;
            if steps > parent.len() {
                return Err(Error::TweetParse {
                    line: lines_of[&t.tweet_id],
                    message: format!("retweet cycle through {}", t.tweet_id),
                });
            }
        }
        t.retweet_of = Some(target);
    }
    Ok(())
}

/// Serializes tweets in the input line format accepted by [`parse_tweets`].
pub fn tweets_to_ndjson(tweets: &[Tweet]) -> String {
    let mut out = String::new();
    for t in tweets {
        let created = DateTime::from_timestamp(t.timestamp, 0)
            .map(|d| d.format("%Y-%m-%dT%H:%M:%SZ").to_string())
            .unwrap_or_default();
        let mut obj = serde_json::Map::new();
        obj.insert("id".into(), t.tweet_id.clone().into());
        obj.insert("user_id".into(), t.user_id.clone().into());
        obj.insert("user_followers".into(), t.user_followers.into());
        obj.insert("created_at".into(), created.into());
        obj.insert("text".into(), t.text.clone().into());
        obj.insert("hashtags".into(), t.hashtags.clone().into());
        if let Some(rt) = &t.retweet_of {
            obj.insert("retweeted_status_id".into(), rt.clone().into());
        }
        out.push_str(&Value::Object(obj).to_string());
        out.push('\n');
    }
    out
}

/// One page from a [`TweetCollector`].
#[derive(Debug, Clone, PartialEq)]
pub struct TweetPage {
    pub tweets: Vec<Tweet>,
    /// Cursor for the next page; `None` when exhausted.
    pub next_cursor: Option<String>,
}

/// Source of tweets for a query, fetched page by page.
pub trait TweetCollector {
    fn fetch_page(&mut self, query: &str, cursor: Option<&str>) -> Result<TweetPage>;

    /// Drains every page for `query`.
    fn collect_all(&mut self, query: &str) -> Result<Vec<Tweet>> {
        let mut out = Vec::new();
        let mut cursor: Option<String> = None;
        loop {
            let page = self.fetch_page(query, cursor.as_deref())?;
            out.extend(page.tweets);
            match page.next_cursor {
                Some(c) => cursor = Some(c),
                None => return Ok(out),
            }
        }
    }
}

/// Serves pre-parsed tweets from a file. The query is matched against
/// hashtags and whole words (case-insensitive); an empty query returns all.
#[derive(Debug, Clone)]
pub struct FileCollector {
    tweets: Vec<Tweet>,
    page_size: usize,
}

impl FileCollector {
    pub fn open(path: impl AsRef<Path>, page_size: usize) -> Result<Self> {
        Ok(Self::from_tweets(read_tweets(path)?, page_size))
    }

    pub fn from_tweets(tweets: Vec<Tweet>, page_size: usize) -> Self {
        Self {
            tweets,
            page_size: page_size.max(1),
        }
    }
}

impl TweetCollector for FileCollector {
    fn fetch_page(&mut self, query: &str, cursor: Option<&str>) -> Result<TweetPage> {
        let start: usize = match cursor {
            None => 0,
            Some(c) => c
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad cursor {c:?}")))?,
        };
        let q = query.trim().trim_start_matches('#').to_lowercase();
        let matching: Vec<&Tweet> = self
            .tweets
            .iter()
            .filter(|t| {
                q.is_empty()
                    || t.hashtags.contains(&q)
                    || crate::tokenizer::basic_split(&t.text).contains(&q)
            })
            .collect();
        let end = (start + self.page_size).min(matching.len());
        Ok(TweetPage {
            tweets: matching.get(start..end).unwrap_or_default().iter().map(|t| (*t).clone()).collect(),
            next_cursor: (end < matching.len()).then(|| end.to_string()),
        })
    }
}
