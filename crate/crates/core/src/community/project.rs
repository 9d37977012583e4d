use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::graph::{Partition, UGraph};
use crate::error::{Error, Result};
use crate::propgraph::{HashtagNetwork, NewsGraph};

/// Which plain graph to derive from a news graph or hashtag network.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProjectionKind {
    /// Users linked by retweets, one unit of weight per retweet.
    #[default]
    Users,
    /// Tweet nodes linked by their original → retweet edges, weight 1.
    Tweets,
    /// Hashtags linked by co-occurrence counts.
    Hashtags,
}

impl FromStr for ProjectionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_lowercase().as_str() {
            "users" | "user" => Ok(ProjectionKind::Users),
            "tweets" | "tweet" => Ok(ProjectionKind::Tweets),
            "hashtags" | "hashtag" => Ok(ProjectionKind::Hashtags),
            other => Err(Error::InvalidArgument(format!(
                "unknown projection `{other}` (expected users, tweets or hashtags)"
            ))),
        }
    }
}

impl fmt::Display for ProjectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProjectionKind::Users => "users",
            ProjectionKind::Tweets => "tweets",
            ProjectionKind::Hashtags => "hashtags",
        })
    }
}

/// A plain weighted graph plus the external id of every node.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub kind: ProjectionKind,
    pub ids: Vec<String>,
    pub graph: UGraph,
}

impl Projection {
    pub fn position(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }
}

/// One node per observed user, in order of first appearance. Retweets of
/// one's own tweets and retweets of unobserved originals add no weight.
pub fn project_users(graph: &NewsGraph) -> Result<Projection> {
    let mut ids: Vec<String> = Vec::new();
    let mut pos: HashMap<&str, usize> = HashMap::new();
    for n in graph.nodes.iter().filter(|n| !n.unobserved) {
        pos.entry(n.user_id.as_str()).or_insert_with(|| {
            ids.push(n.user_id.clone());
            ids.len() - 1
        });
    }
    let author: HashMap<&str, &str> = graph
        .nodes
        .iter()
        .filter(|n| !n.unobserved)
        .map(|n| (n.tweet_id.as_str(), n.user_id.as_str()))
        .collect();
    let edges = graph.edges.iter().filter_map(|e| {
        let a = *author.get(e.source.as_str())?;
        let b = *author.get(e.target.as_str())?;
        (a != b).then(|| (pos[a], pos[b], 1.0))
    });
    let graph = UGraph::new(ids.len(), edges.collect::<Vec<_>>())?;
    Ok(Projection {
        kind: ProjectionKind::Users,
        ids,
        graph,
    })
}

/// One node per news-graph node, in graph order.
pub fn project_tweets(graph: &NewsGraph) -> Result<Projection> {
    let index = graph.index();
    let edges: Vec<(usize, usize, f64)> = graph
        .edges
        .iter()
        .map(|e| {
            match (index.get(e.source.as_str()), index.get(e.target.as_str())) {
                (Some(&s), Some(&t)) => Ok((s, t, 1.0)),
                _ => Err(Error::Graph(format!("edge {} -> {} has a missing endpoint", e.source, e.target))),
            }
        })
        .collect::<Result<_>>()?;
    Ok(Projection {
        kind: ProjectionKind::Tweets,
        ids: graph.nodes.iter().map(|n| n.tweet_id.clone()).collect(),
        graph: UGraph::new(graph.nodes.len(), edges)?,
    })
}

/// One node per hashtag, sorted by tag.
pub fn project_hashtags(network: &HashtagNetwork) -> Result<Projection> {
    let ids: Vec<String> = network.nodes().keys().cloned().collect();
    let pos: BTreeMap<&str, usize> = ids.iter().enumerate().map(|(i, t)| (t.as_str(), i)).collect();
    let edges: Vec<(usize, usize, f64)> = network
        .edges()
        .iter()
        .map(|((a, b), &w)| (pos[a.as_str()], pos[b.as_str()], w as f64))
        .collect();
    Ok(Projection {
        kind: ProjectionKind::Hashtags,
        graph: UGraph::new(ids.len(), edges)?,
        ids,
    })
}

pub fn project(kind: ProjectionKind, graph: &NewsGraph, hashtags: &HashtagNetwork) -> Result<Projection> {
    match kind {
        ProjectionKind::Users => project_users(graph),
        ProjectionKind::Tweets => project_tweets(graph),
        ProjectionKind::Hashtags => project_hashtags(hashtags),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeCommunity {
    pub id: String,
    pub community: usize,
}

/// A partition keyed by external node ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledPartition {
    pub projection: ProjectionKind,
    pub method: super::Method,
    pub seed: u64,
    pub quality: f64,
    pub quality_name: String,
    pub count: usize,
    pub nodes: Vec<NodeCommunity>,
}

impl LabeledPartition {
    pub fn new(projection: &Projection, partition: &Partition, seed: u64) -> Result<Self> {
        if partition.assignment.len() != projection.ids.len() {
            return Err(Error::IdMismatch(format!(
                "partition covers {} nodes but projection has {}",
                partition.assignment.len(),
                projection.ids.len()
            )));
        }
        Ok(Self {
            projection: projection.kind,
            method: partition.method,
            seed,
            quality: partition.quality,
            quality_name: partition.method.quality_name().to_string(),
            count: partition.count,
            nodes: projection
                .ids
                .iter()
                .zip(&partition.assignment)
                .map(|(id, &community)| NodeCommunity {
                    id: id.clone(),
                    community,
                })
                .collect(),
        })
    }

    pub fn lookup(&self) -> HashMap<&str, usize> {
        self.nodes.iter().map(|n| (n.id.as_str(), n.community)).collect()
    }
}
