use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifier::{Prediction, TextScorer};
use crate::error::{Error, Result};
use crate::propgraph::{GraphNode, NewsGraph};

/// A news graph with one prediction per node, aligned with `graph.nodes`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotatedGraph {
    pub graph: NewsGraph,
    pub predictions: Vec<Prediction>,
    pub threshold: f64,
}

impl AnnotatedGraph {
    pub fn new(graph: NewsGraph, predictions: Vec<Prediction>, threshold: f64) -> Result<Self> {
        if graph.nodes.len() != predictions.len() {
            return Err(Error::IdMismatch(format!(
                "{} predictions for {} nodes",
                predictions.len(),
                graph.nodes.len()
            )));
        }
        Ok(Self {
            graph,
            predictions,
            threshold,
        })
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&GraphNode, &Prediction)> {
        self.graph.nodes.iter().zip(&self.predictions)
    }

    /// Label (1 fake, 0 real) of the cascade each retweet belongs to, keyed
    /// by retweet id.
    pub fn retweet_labels(&self) -> HashMap<&str, u8> {
        let index = self.graph.index();
        self.graph
            .edges
            .iter()
            .map(|e| (e.target.as_str(), self.predictions[index[e.source.as_str()]].label))
            .collect()
    }
}

/// Scores every original once; retweets copy their original's prediction.
pub fn annotate(graph: &NewsGraph, scorer: &dyn TextScorer, threshold: f64) -> Result<AnnotatedGraph> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::InvalidArgument(format!("threshold {threshold} outside [0, 1]")));
    }
    let originals: Vec<usize> = (0..graph.nodes.len()).filter(|&i| graph.nodes[i].is_original()).collect();
    let scored: Vec<Prediction> = originals
        .par_iter()
        .map(|&i| scorer.predict(&graph.nodes[i].text, threshold))
        .collect::<Result<_>>()?;
    let by_id: HashMap<&str, Prediction> = originals
        .iter()
        .zip(scored)
        .map(|(&i, p)| (graph.nodes[i].tweet_id.as_str(), p))
        .collect();
    let parent: HashMap<&str, &str> = graph
        .edges
        .iter()
        .map(|e| (e.target.as_str(), e.source.as_str()))
        .collect();
    let predictions = graph
        .nodes
        .iter()
        .map(|n| {
            let key = if n.is_original() {
                n.tweet_id.as_str()
            } else {
                parent
                    .get(n.tweet_id.as_str())
                    .copied()
                    .ok_or_else(|| Error::Graph(format!("retweet {} has no original", n.tweet_id)))?
            };
            by_id
                .get(key)
                .copied()
                .ok_or_else(|| Error::Graph(format!("original {key} missing from graph")))
        })
        .collect::<Result<Vec<_>>>()?;
    AnnotatedGraph::new(graph.clone(), predictions, threshold)
}

/// Node, link and user counts plus the observed time range.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub nodes: usize,
    pub links: usize,
    pub originals: usize,
    pub retweets: usize,
    pub unobserved_originals: usize,
    pub skew_rejected: usize,
    pub distinct_users: usize,
    pub fake_originals: usize,
    pub real_originals: usize,
    pub first_timestamp: Option<i64>,
    pub last_timestamp: Option<i64>,
}

pub fn summarize(annotated: &AnnotatedGraph) -> GraphSummary {
    let g = &annotated.graph;
    let observed = g.nodes.iter().filter(|n| !n.unobserved);
    let users: BTreeSet<&str> = observed.clone().map(|n| n.user_id.as_str()).collect();
    let (mut fake, mut real) = (0, 0);
    for (n, p) in annotated.nodes() {
        if n.is_original() {
            if p.label == 1 {
                fake += 1;
            } else {
                real += 1;
            }
        }
    }
    GraphSummary {
        nodes: g.node_count(),
        links: g.edge_count(),
        originals: fake + real,
        retweets: g.node_count() - fake - real,
        unobserved_originals: g.unobserved_count(),
        skew_rejected: g.skew_rejected.len(),
        distinct_users: users.len(),
        fake_originals: fake,
        real_originals: real,
        first_timestamp: observed.clone().map(|n| n.timestamp).min(),
        last_timestamp: observed.map(|n| n.timestamp).max(),
    }
}
