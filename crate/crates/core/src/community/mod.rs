//! Community detection: Louvain modularity optimization and two-level
//! Infomap over weighted undirected graphs.

mod graph;
mod infomap;
mod louvain;
mod project;

pub use graph::{dense_labels, Method, Partition, UGraph};
pub use infomap::{infomap, infomap_traced, map_equation, plogp, visit_entropy};
pub use louvain::{louvain, louvain_traced, modularity};
pub use project::{
    project, project_hashtags, project_tweets, project_users, LabeledPartition, NodeCommunity, Projection,
    ProjectionKind,
};

use crate::error::Result;

/// Runs the chosen method.
pub fn detect(graph: &UGraph, method: Method, seed: u64) -> Result<Partition> {
    match method {
        Method::Louvain => louvain(graph, seed),
        Method::Infomap => infomap(graph, seed),
    }
}
