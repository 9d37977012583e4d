use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::tweet::Tweet;
use crate::error::{Error, Result};
use crate::tokenizer::basic_split;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KeywordMode {
    /// Every keyword must appear.
    #[default]
    All,
    /// At least one keyword must appear.
    Any,
}

/// Splits a comma-separated keyword list, lowercasing and dropping blanks.
pub fn parse_keywords(list: &str) -> Vec<String> {
    list.split(',')
        .map(|k| k.trim().trim_start_matches('#').to_lowercase())
        .filter(|k| !k.is_empty())
        .collect()
}

/// Whole-token AND match over the tweet text and hashtags.
pub fn match_keywords<S: AsRef<str>>(tweet: &Tweet, keywords: &[S]) -> Result<bool> {
    match_keywords_with(tweet, keywords, KeywordMode::All)
}

pub fn match_keywords_with<S: AsRef<str>>(
    tweet: &Tweet,
    keywords: &[S],
    mode: KeywordMode,
) -> Result<bool> {
    if keywords.is_empty() {
        return Err(Error::InvalidArgument("keyword list is empty".into()));
    }
    Ok(text_matches(&tweet.text, &tweet.hashtags, keywords, mode))
}

fn text_matches<S: AsRef<str>>(text: &str, hashtags: &[String], keywords: &[S], mode: KeywordMode) -> bool {
    let tokens: HashSet<String> = basic_split(text).into_iter().chain(hashtags.iter().cloned()).collect();
    let hit = |k: &S| tokens.contains(&k.as_ref().to_lowercase());
    match mode {
        KeywordMode::All => keywords.iter().all(hit),
        KeywordMode::Any => keywords.iter().any(hit),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Original,
    Retweet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphNode {
    pub tweet_id: String,
    pub user_id: String,
    pub followers: u64,
    pub timestamp: i64,
    pub text: String,
    pub hashtags: Vec<String>,
    pub kind: NodeKind,
    /// Placeholder for an original that was retweeted but not collected.
    pub unobserved: bool,
    /// Retweet count for originals, always 0 for retweets.
    pub out_degree: u64,
}

impl GraphNode {
    pub fn is_original(&self) -> bool {
        self.kind == NodeKind::Original
    }
}

/// Directed original → retweet edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewsEdge {
    pub source: String,
    pub target: String,
    /// Seconds from the original to the retweet.
    pub time_weight: i64,
}

/// Tweets matching a news item's keywords plus edges to their retweets.
///
/// Nodes are grouped per cascade: each original is followed by its
/// retweets in timestamp order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewsGraph {
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<NewsEdge>,
    /// Retweets dropped because they predate their original.
    pub skew_rejected: Vec<String>,
}

impl NewsGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn originals(&self) -> impl Iterator<Item = &GraphNode> {
        self.nodes.iter().filter(|n| n.is_original())
    }

    pub fn retweets(&self) -> impl Iterator<Item = &GraphNode> {
        self.nodes.iter().filter(|n| !n.is_original())
    }

    pub fn unobserved_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.unobserved).count()
    }

    /// Map from tweet id to node position.
    pub fn index(&self) -> HashMap<&str, usize> {
        self.nodes.iter().enumerate().map(|(i, n)| (n.tweet_id.as_str(), i)).collect()
    }

    pub fn node(&self, tweet_id: &str) -> Option<&GraphNode> {
        self.nodes.iter().find(|n| n.tweet_id == tweet_id)
    }

    /// Length of the longest directed path. At most 1 for a valid graph.
    pub fn depth(&self) -> usize {
        if self.edges.is_empty() {
            return 0;
        }
        let sources: HashSet<&str> = self.edges.iter().map(|e| e.source.as_str()).collect();
        if self.edges.iter().any(|e| sources.contains(e.target.as_str())) {
            2
        } else {
            1
        }
    }

    /// The collected tweets behind the graph, skipping placeholders.
    pub fn observed_tweets(&self) -> Vec<Tweet> {
        let parent: HashMap<&str, &str> = self
            .edges
            .iter()
            .map(|e| (e.target.as_str(), e.source.as_str()))
            .collect();
        self.nodes
            .iter()
            .filter(|n| !n.unobserved)
            .map(|n| Tweet {
                tweet_id: n.tweet_id.clone(),
                user_id: n.user_id.clone(),
                user_followers: n.followers,
                timestamp: n.timestamp,
                text: n.text.clone(),
                hashtags: n.hashtags.clone(),
                retweet_of: parent.get(n.tweet_id.as_str()).map(|s| s.to_string()),
            })
            .collect()
    }

    /// Checks the structural invariants: unique ids, edges from an original
    /// to a retweet, non-negative time weights, out-degree = retweet count.
    pub fn validate(&self) -> Result<()> {
        let index = self.index();
        if index.len() != self.nodes.len() {
            return Err(Error::Graph("duplicate node id".into()));
        }
        let mut degree: HashMap<&str, u64> = HashMap::new();
        let mut has_parent = HashSet::new();
        for e in &self.edges {
            let (Some(&s), Some(&t)) = (index.get(e.source.as_str()), index.get(e.target.as_str())) else {
                return Err(Error::Graph(format!("edge {} -> {} has a missing endpoint", e.source, e.target)));
            };
            if !self.nodes[s].is_original() || self.nodes[t].is_original() {
                return Err(Error::Graph(format!("edge {} -> {} is not original -> retweet", e.source, e.target)));
            }
            if e.time_weight < 0 {
                return Err(Error::Graph(format!("negative time weight on {} -> {}", e.source, e.target)));
            }
            if !has_parent.insert(t) {
                return Err(Error::Graph(format!("retweet {} has two originals", e.target)));
            }
            *degree.entry(e.source.as_str()).or_default() += 1;
        }
        for (i, n) in self.nodes.iter().enumerate() {
            let expected = if n.is_original() {
                degree.get(n.tweet_id.as_str()).copied().unwrap_or(0)
            } else {
                if !has_parent.contains(&i) {
                    return Err(Error::Graph(format!("retweet {} has no original", n.tweet_id)));
                }
                0
            };
            if n.out_degree != expected {
                return Err(Error::Graph(format!(
                    "node {} out-degree {} but {} outgoing edges",
                    n.tweet_id, n.out_degree, expected
                )));
            }
        }
        Ok(())
    }
}

fn node_from(tweet: &Tweet, kind: NodeKind) -> GraphNode {
    GraphNode {
        tweet_id: tweet.tweet_id.clone(),
        user_id: tweet.user_id.clone(),
        followers: tweet.user_followers,
        timestamp: tweet.timestamp,
        text: tweet.text.clone(),
        hashtags: tweet.hashtags.clone(),
        kind,
        unobserved: false,
        out_degree: 0,
    }
}

/// Builds the news graph with AND keyword semantics.
pub fn build_news_graph<S: AsRef<str>>(tweets: &[Tweet], keywords: &[S]) -> Result<NewsGraph> {
    build_news_graph_with(tweets, keywords, KeywordMode::All)
}

/// Builds the news graph for `keywords`.
///
/// Originals that match become tweet nodes; every retweet of a matching
/// original becomes a retweet node. A retweet whose original is missing from
/// `tweets` is kept when the retweet itself matches: its original becomes an
/// `unobserved` placeholder stamped at the earliest such retweet.
pub fn build_news_graph_with<S: AsRef<str>>(
    tweets: &[Tweet],
    keywords: &[S],
    mode: KeywordMode,
) -> Result<NewsGraph> {
    if keywords.is_empty() {
        return Err(Error::InvalidArgument("keyword list is empty".into()));
    }
    let originals: HashMap<&str, &Tweet> = tweets
        .iter()
        .filter(|t| !t.is_retweet())
        .map(|t| (t.tweet_id.as_str(), t))
        .collect();

    let mut cascades: BTreeMap<usize, (GraphNode, Vec<&Tweet>)> = BTreeMap::new();
    let mut slot_of: HashMap<&str, usize> = HashMap::new();
    for (pos, t) in tweets.iter().enumerate() {
        match t.retweet_of.as_deref() {
            None => {
                if text_matches(&t.text, &t.hashtags, keywords, mode) {
                    slot_of.insert(&t.tweet_id, pos);
                    cascades.insert(pos, (node_from(t, NodeKind::Original), Vec::new()));
                }
            }
            Some(orig) if originals.contains_key(orig) => {}
            Some(orig) => {
                if !text_matches(&t.text, &t.hashtags, keywords, mode) {
                    continue;
                }
                let slot = *slot_of.entry(orig).or_insert(pos);
                let entry = cascades.entry(slot).or_insert_with(|| {
                    let mut n = node_from(t, NodeKind::Original);
                    n.tweet_id = orig.to_string();
                    n.user_id = String::new();
                    n.followers = 0;
                    n.unobserved = true;
                    (n, Vec::new())
                });
                if t.timestamp < entry.0.timestamp {
                    entry.0.timestamp = t.timestamp;
                    entry.0.text = t.text.clone();
                    entry.0.hashtags = t.hashtags.clone();
                }
            }
        }
    }
    for t in tweets {
        if let Some(&slot) = t.retweet_of.as_deref().and_then(|o| slot_of.get(o)) {
            cascades.get_mut(&slot).expect("slot registered").1.push(t);
        }
    }

    let mut graph = NewsGraph::default();
    for (_, (mut original, mut retweets)) in cascades {
        retweets.sort_by_key(|r| r.timestamp);
        let mut kept = Vec::with_capacity(retweets.len());
        for r in retweets {
            if r.timestamp < original.timestamp {
                graph.skew_rejected.push(r.tweet_id.clone());
            } else {
                kept.push(r);
            }
        }
        original.out_degree = kept.len() as u64;
        let source = original.tweet_id.clone();
        let start = original.timestamp;
        graph.nodes.push(original);
        for r in kept {
            graph.edges.push(NewsEdge {
                source: source.clone(),
                target: r.tweet_id.clone(),
                time_weight: r.timestamp - start,
            });
            graph.nodes.push(node_from(r, NodeKind::Retweet));
        }
    }
    Ok(graph)
}

pub const MIN_NODE_SIZE: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeMode {
    OutDegree,
    Followers,
}

impl FromStr for SizeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_lowercase().replace('-', "_").as_str() {
            "out_degree" => Ok(SizeMode::OutDegree),
            "followers" => Ok(SizeMode::Followers),
            other => Err(Error::InvalidArgument(format!(
                "unknown size mode `{other}` (expected out_degree or followers)"
            ))),
        }
    }
}

impl fmt::Display for SizeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SizeMode::OutDegree => "out_degree",
            SizeMode::Followers => "followers",
        })
    }
}

/// Square-root scaling with a floor of [`MIN_NODE_SIZE`].
pub fn scaled_size(value: u64) -> f64 {
    (value as f64).sqrt().max(MIN_NODE_SIZE)
}

pub fn node_size(node: &GraphNode, mode: SizeMode) -> f64 {
    scaled_size(match mode {
        SizeMode::OutDegree => node.out_degree,
        SizeMode::Followers => node.followers,
    })
}
