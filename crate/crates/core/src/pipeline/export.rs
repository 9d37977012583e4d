use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::annotate::{AnnotatedGraph, GraphSummary};
use super::trend::TrendSeries;
use crate::community::{LabeledPartition, Method, ProjectionKind};
use crate::error::{Error, Result};
use crate::propgraph::{node_size, HashtagLink, HashtagNetwork, HashtagNode, KeywordMode, NodeKind, SizeMode};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelName {
    Fake,
    Real,
}

impl From<u8> for LabelName {
    fn from(label: u8) -> Self {
        if label == 1 {
            LabelName::Fake
        } else {
            LabelName::Real
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeSizes {
    pub out_degree: f64,
    pub followers: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportNode {
    pub id: String,
    pub user: String,
    pub followers: u64,
    pub kind: NodeKind,
    pub unobserved: bool,
    pub timestamp: i64,
    pub text: String,
    pub hashtags: Vec<String>,
    pub label: LabelName,
    pub probability: f64,
    /// Absent when no partition covers the node.
    pub community: Option<usize>,
    pub out_degree: u64,
    pub size: NodeSizes,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportLink {
    pub source: String,
    pub target: String,
    pub time_weight: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityMeta {
    pub method: Method,
    pub projection: ProjectionKind,
    pub quality: f64,
    pub quality_name: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportMeta {
    pub seed: u64,
    pub threshold: f64,
    pub viral_threshold: u64,
    pub bucket_seconds: i64,
    pub keywords: Vec<String>,
    pub keyword_mode: KeywordMode,
    /// Absent when the projected graph had no edges to cluster.
    pub community: Option<CommunityMeta>,
}

/// The self-contained JSON document read by the explorer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplorerDocument {
    pub schema_version: u32,
    pub summary: GraphSummary,
    pub nodes: Vec<ExportNode>,
    pub links: Vec<ExportLink>,
    pub hashtag_nodes: Vec<HashtagNode>,
    pub hashtag_links: Vec<HashtagLink>,
    pub trend: TrendSeries,
    pub meta: ExportMeta,
}

/// Community id per news-graph node, checking that `partition` covers
/// exactly the node set implied by its projection.
fn node_communities(annotated: &AnnotatedGraph, partition: &LabeledPartition) -> Result<Vec<Option<usize>>> {
    let lookup = partition.lookup();
    let nodes = &annotated.graph.nodes;
    let (expected, key): (BTreeSet<&str>, fn(&crate::propgraph::GraphNode) -> &str) = match partition.projection {
        ProjectionKind::Tweets => (nodes.iter().map(|n| n.tweet_id.as_str()).collect(), |n| n.tweet_id.as_str()),
        ProjectionKind::Users => (
            nodes.iter().filter(|n| !n.unobserved).map(|n| n.user_id.as_str()).collect(),
            |n| n.user_id.as_str(),
        ),
        ProjectionKind::Hashtags => {
            return Err(Error::IdMismatch("a hashtag partition cannot label tweet nodes".into()));
        }
    };
    let given: BTreeSet<&str> = lookup.keys().copied().collect();
    if given != expected || lookup.len() != partition.nodes.len() {
        let missing = expected.difference(&given).next();
        let extra = given.difference(&expected).next();
        return Err(Error::IdMismatch(format!(
            "{} partition does not match graph ids (missing {:?}, unexpected {:?})",
            partition.projection, missing, extra
        )));
    }
    Ok(nodes
        .iter()
        .map(|n| {
            if partition.projection == ProjectionKind::Users && n.unobserved {
                None
            } else {
                lookup.get(key(n)).copied()
            }
        })
        .collect())
}

impl ExplorerDocument {
    pub fn build(
        annotated: &AnnotatedGraph,
        partition: Option<&LabeledPartition>,
        trend: &TrendSeries,
        summary: &GraphSummary,
        hashtags: &HashtagNetwork,
        mut meta: ExportMeta,
    ) -> Result<Self> {
        let communities = match partition {
            Some(p) => {
                meta.community = Some(CommunityMeta {
                    method: p.method,
                    projection: p.projection,
                    quality: p.quality,
                    quality_name: p.quality_name.clone(),
                    count: p.count,
                });
                node_communities(annotated, p)?
            }
            None => {
                meta.community = None;
                vec![None; annotated.graph.nodes.len()]
            }
        };
        let nodes = annotated
            .nodes()
            .zip(communities)
            .map(|((n, p), community)| ExportNode {
                id: n.tweet_id.clone(),
                user: n.user_id.clone(),
                followers: n.followers,
                kind: n.kind,
                unobserved: n.unobserved,
                timestamp: n.timestamp,
                text: n.text.clone(),
                hashtags: n.hashtags.clone(),
                label: p.label.into(),
                probability: p.probability,
                community,
                out_degree: n.out_degree,
                size: NodeSizes {
                    out_degree: node_size(n, SizeMode::OutDegree),
                    followers: node_size(n, SizeMode::Followers),
                },
            })
            .collect();
        let links = annotated
            .graph
            .edges
            .iter()
            .map(|e| ExportLink {
                source: e.source.clone(),
                target: e.target.clone(),
                time_weight: e.time_weight,
            })
            .collect();
        Ok(Self {
            schema_version: SCHEMA_VERSION,
            summary: summary.clone(),
            nodes,
            links,
            hashtag_nodes: hashtags.node_list(),
            hashtag_links: hashtags.link_list(),
            trend: trend.clone(),
            meta,
        })
    }

    /// Pretty JSON with object keys sorted, ending in a newline.
    pub fn to_json(&self) -> Result<String> {
        let value = serde_json::to_value(self)?;
        let mut out = serde_json::to_string_pretty(&value)?;
        out.push('\n');
        Ok(out)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text)?;
        doc.check()?;
        Ok(doc)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::from_json(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
    }

    /// Structural checks: version, unique node ids, links between known
    /// nodes, counts agreeing with the summary.
    pub fn check(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let ids: HashMap<&str, &ExportNode> = self.nodes.iter().map(|n| (n.id.as_str(), n)).collect();
        if ids.len() != self.nodes.len() {
            return Err(Error::Graph("duplicate node id in document".into()));
        }
        for l in &self.links {
            match (ids.get(l.source.as_str()), ids.get(l.target.as_str())) {
                (Some(s), Some(t)) if s.kind == NodeKind::Original && t.kind == NodeKind::Retweet => {}
                _ => return Err(Error::Graph(format!("bad link {} -> {}", l.source, l.target))),
            }
        }
        if self.summary.nodes != self.nodes.len() || self.summary.links != self.links.len() {
            return Err(Error::Graph("summary counts disagree with nodes and links".into()));
        }
        HashtagNetwork::from_parts(self.hashtag_nodes.clone(), self.hashtag_links.clone())?;
        Ok(())
    }
}
