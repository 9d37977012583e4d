use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weighted undirected graph on nodes `0..n`.
///
/// Parallel edges are merged by summing weights. Self-loops only appear in
/// coarsened graphs; a loop of weight `w` adds `2w` to its node's strength.
#[derive(Debug, Clone, PartialEq)]
pub struct UGraph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
    self_loops: Vec<f64>,
    adjacency: Vec<Vec<(usize, f64)>>,
    strength: Vec<f64>,
    total_weight: f64,
}

impl UGraph {
    /// Builds a graph from `(u, v, w)` triples with `u != v` and `w > 0`.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::Graph(format!("edge ({u}, {v}) out of range for {n} nodes")));
            }
            if u == v {
                return Err(Error::Graph(format!("self-loop on node {u}")));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::Graph(format!("edge ({u}, {v}) has non-positive weight {w}")));
            }
            *merged.entry((u.min(v), u.max(v))).or_insert(0.0) += w;
        }
        Ok(Self::assemble(n, merged, vec![0.0; n]))
    }

    pub(crate) fn assemble(n: usize, merged: BTreeMap<(usize, usize), f64>, self_loops: Vec<f64>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        let mut strength: Vec<f64> = self_loops.iter().map(|w| 2.0 * w).collect();
        let mut total_weight: f64 = self_loops.iter().sum();
        let edges: Vec<(usize, usize, f64)> = merged.into_iter().map(|((u, v), w)| (u, v, w)).collect();
        for &(u, v, w) in &edges {
            adjacency[u].push((v, w));
            adjacency[v].push((u, w));
            strength[u] += w;
            strength[v] += w;
            total_weight += w;
        }
        Self {
            n,
            edges,
            self_loops,
            adjacency,
            strength,
            total_weight,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Edges between distinct nodes with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn self_loop(&self, node: usize) -> f64 {
        self.self_loops[node]
    }

    /// Neighbors of `node` excluding itself.
    pub fn neighbors(&self, node: usize) -> &[(usize, f64)] {
        &self.adjacency[node]
    }

    /// Weighted degree, with self-loops counted twice.
    pub fn strength(&self, node: usize) -> f64 {
        self.strength[node]
    }

    /// Sum of edge weights, self-loops included once.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub(crate) fn require_edges(&self) -> Result<()> {
        if self.total_weight > 0.0 {
            Ok(())
        } else {
            Err(Error::Graph("graph has no edge weight".into()))
        }
    }

    /// Collapses each community of `assignment` (dense ids `0..count`) into
    /// one node; intra-community weight becomes a self-loop.
    pub fn coarsen(&self, assignment: &[usize], count: usize) -> UGraph {
        let mut loops = vec![0.0; count];
        for (node, &w) in self.self_loops.iter().enumerate() {
            loops[assignment[node]] += w;
        }
        let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for &(u, v, w) in &self.edges {
            let (cu, cv) = (assignment[u], assignment[v]);
            if cu == cv {
                loops[cu] += w;
            } else {
                *merged.entry((cu.min(cv), cu.max(cv))).or_insert(0.0) += w;
            }
        }
        UGraph::assemble(count, merged, loops)
    }
}

/// Relabels arbitrary community labels to `0..k` in order of first
/// appearance. Returns the new labels and `k`.
pub fn dense_labels(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut map: BTreeMap<usize, usize> = BTreeMap::new();
    let dense = labels
        .iter()
        .map(|l| {
            let next = map.len();
            *map.entry(*l).or_insert(next)
        })
        .collect();
    (dense, map.len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Louvain,
    Infomap,
}

impl Method {
    /// Name of the objective reported in `Partition::quality`.
    pub fn quality_name(&self) -> &'static str {
        match self {
            Method::Louvain => "modularity",
            Method::Infomap => "map_equation_bits",
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_lowercase().as_str() {
            "louvain" => Ok(Method::Louvain),
            "infomap" => Ok(Method::Infomap),
            other => Err(Error::InvalidArgument(format!(
                "unknown method `{other}` (expected louvain or infomap)"
            ))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Louvain => "louvain",
            Method::Infomap => "infomap",
        })
    }
}

/// Community assignment for every node of a graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    /// Community id per node, dense in `0..count`.
    pub assignment: Vec<usize>,
    pub count: usize,
    /// Modularity for Louvain, map-equation length in bits for Infomap.
    pub quality: f64,
    pub method: Method,
}

impl Partition {
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.count];
        for (node, &c) in self.assignment.iter().enumerate() {
            groups[c].push(node);
        }
        groups
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = vec![false; self.count];
        for &c in &self.assignment {
            *seen.get_mut(c).ok_or_else(|| Error::Graph(format!("community {c} >= count {}", self.count)))? = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Graph("community ids are not dense".into()));
        }
        Ok(())
    }
}

pub(crate) fn check_assignment(graph: &UGraph, assignment: &[usize]) -> Result<()> {
    if assignment.len() != graph.node_count() {
        return Err(Error::Graph(format!(
            "partition covers {} nodes but graph has {}",
            assignment.len(),
            graph.node_count()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_parallel_edges() {
        let g = UGraph::new(3, [(0, 1, 1.0), (1, 0, 2.0), (1, 2, 1.0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1, 3.0), (1, 2, 1.0)]);
        assert_eq!(g.strength(1), 4.0);
        assert_eq!(g.total_weight(), 4.0);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(UGraph::new(2, [(0, 0, 1.0)]).is_err());
        assert!(UGraph::new(2, [(0, 1, 0.0)]).is_err());
        assert!(UGraph::new(2, [(0, 2, 1.0)]).is_err());
        assert!(UGraph::new(2, [(0, 1, f64::NAN)]).is_err());
    }

    #[test]
    fn coarsen_keeps_weight_and_strength() {
        let g = UGraph::new(4, [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 1.0)]).unwrap();
        let c = g.coarsen(&[0, 0, 1, 1], 2);
        assert_eq!(c.total_weight(), g.total_weight());
        assert_eq!(c.self_loop(0), 1.0);
        assert_eq!(c.strength(0), g.strength(0) + g.strength(1));
        assert_eq!(c.edges(), &[(0, 1, 2.0)]);
    }

    #[test]
    fn dense_relabel() {
        assert_eq!(dense_labels(&[7, 3, 7, 9]), (vec![0, 1, 0, 2], 3));
    }
}
