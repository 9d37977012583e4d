use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::tweet::Tweet;
use crate::error::{Error, Result};

/// Hashtag usage counts and pairwise co-occurrence counts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "HashtagNetworkRepr", try_from = "HashtagNetworkRepr")]
pub struct HashtagNetwork {
    nodes: BTreeMap<String, u64>,
    /// Keyed by the pair in lexicographic order.
    edges: BTreeMap<(String, String), u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HashtagNode {
    pub tag: String,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HashtagLink {
    pub source: String,
    pub target: String,
    pub weight: u64,
}

#[derive(Serialize, Deserialize)]
struct HashtagNetworkRepr {
    nodes: Vec<HashtagNode>,
    links: Vec<HashtagLink>,
}

impl From<HashtagNetwork> for HashtagNetworkRepr {
    fn from(n: HashtagNetwork) -> Self {
        HashtagNetworkRepr {
            nodes: n.node_list(),
            links: n.link_list(),
        }
    }
}

impl TryFrom<HashtagNetworkRepr> for HashtagNetwork {
    type Error = Error;

    fn try_from(r: HashtagNetworkRepr) -> Result<Self> {
        HashtagNetwork::from_parts(r.nodes, r.links)
    }
}

fn ordered(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

impl HashtagNetwork {
    /// Rebuilds a network from node and link lists, checking its invariants.
    pub fn from_parts(nodes: Vec<HashtagNode>, links: Vec<HashtagLink>) -> Result<Self> {
        let mut net = HashtagNetwork::default();
        for n in nodes {
            if n.count == 0 {
                return Err(Error::Graph(format!("hashtag `{}` has zero count", n.tag)));
            }
            if net.nodes.insert(n.tag.clone(), n.count).is_some() {
                return Err(Error::Graph(format!("duplicate hashtag `{}`", n.tag)));
            }
        }
        for l in links {
            if l.source == l.target {
                return Err(Error::Graph(format!("self-loop on `{}`", l.source)));
            }
            if l.weight == 0 {
                return Err(Error::Graph(format!("zero weight on {} - {}", l.source, l.target)));
            }
            if !net.nodes.contains_key(&l.source) || !net.nodes.contains_key(&l.target) {
                return Err(Error::Graph(format!("link {} - {} has a missing endpoint", l.source, l.target)));
            }
            if net.edges.insert(ordered(&l.source, &l.target), l.weight).is_some() {
                return Err(Error::Graph(format!("duplicate link {} - {}", l.source, l.target)));
            }
        }
        Ok(net)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn usage(&self, tag: &str) -> u64 {
        self.nodes.get(tag).copied().unwrap_or(0)
    }

    /// Co-occurrence count, symmetric in its arguments.
    pub fn weight(&self, a: &str, b: &str) -> u64 {
        self.edges.get(&ordered(a, b)).copied().unwrap_or(0)
    }

    pub fn nodes(&self) -> &BTreeMap<String, u64> {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeMap<(String, String), u64> {
        &self.edges
    }

    /// Nodes sorted by tag.
    pub fn node_list(&self) -> Vec<HashtagNode> {
        self.nodes
            .iter()
            .map(|(tag, &count)| HashtagNode { tag: tag.clone(), count })
            .collect()
    }

    /// Links sorted by (source, target) with source < target.
    pub fn link_list(&self) -> Vec<HashtagLink> {
        self.edges
            .iter()
            .map(|((a, b), &weight)| HashtagLink {
                source: a.clone(),
                target: b.clone(),
                weight,
            })
            .collect()
    }
}

/// Counts each tag once per tweet and each unordered tag pair once per tweet.
pub fn build_hashtag_network(tweets: &[Tweet]) -> HashtagNetwork {
    let mut net = HashtagNetwork::default();
    for t in tweets {
        let mut tags: Vec<&str> = t.hashtags.iter().map(String::as_str).collect();
        tags.sort_unstable();
        tags.dedup();
        for (i, a) in tags.iter().enumerate() {
            *net.nodes.entry(a.to_string()).or_default() += 1;
            for b in &tags[i + 1..] {
                *net.edges.entry((a.to_string(), b.to_string())).or_default() += 1;
            }
        }
    }
    net
}
