use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::graph::{check_assignment, dense_labels, Method, Partition, UGraph};
use crate::error::Result;

/// Smallest gain accepted as an improvement.
const MIN_GAIN: f64 = 1e-12;

/// Newman-Girvan modularity of `assignment` (any labels, one per node).
pub fn modularity(graph: &UGraph, assignment: &[usize]) -> Result<f64> {
    check_assignment(graph, assignment)?;
    graph.require_edges()?;
    let (labels, k) = dense_labels(assignment);
    let two_m = 2.0 * graph.total_weight();
    let mut inside = vec![0.0; k];
    let mut total = vec![0.0; k];
    for node in 0..graph.node_count() {
        inside[labels[node]] += 2.0 * graph.self_loop(node);
        total[labels[node]] += graph.strength(node);
    }
    for &(u, v, w) in graph.edges() {
        if labels[u] == labels[v] {
            inside[labels[u]] += 2.0 * w;
        }
    }
    Ok((0..k)
        .map(|c| inside[c] / two_m - (total[c] / two_m).powi(2))
        .sum())
}

/// Louvain partition maximizing modularity.
pub fn louvain(graph: &UGraph, seed: u64) -> Result<Partition> {
    Ok(louvain_traced(graph, seed)?.0)
}

/// Louvain plus the modularity after every accepted move, starting with the
/// singleton partition's value.
pub fn louvain_traced(graph: &UGraph, seed: u64) -> Result<(Partition, Vec<f64>)> {
    graph.require_edges()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let singletons: Vec<usize> = (0..graph.node_count()).collect();
    let mut trace = vec![modularity(graph, &singletons)?];
    let mut assignment = singletons;
    let mut level = graph.clone();
    loop {
        let (local, moved) = local_moves(&level, &mut rng, &mut trace);
        if !moved {
            break;
        }
        let (local, count) = dense_labels(&local);
        for c in assignment.iter_mut() {
            *c = local[*c];
        }
        level = level.coarsen(&local, count);
    }
    let (assignment, count) = dense_labels(&assignment);
    let quality = modularity(graph, &assignment)?;
    Ok((
        Partition {
            assignment,
            count,
            quality,
            method: Method::Louvain,
        },
        trace,
    ))
}

/// One level of greedy moves from singletons. Returns the community label
/// per node and whether anything moved.
fn local_moves(graph: &UGraph, rng: &mut ChaCha8Rng, trace: &mut Vec<f64>) -> (Vec<usize>, bool) {
    let n = graph.node_count();
    let m = graph.total_weight();
    let mut community: Vec<usize> = (0..n).collect();
    let mut total: Vec<f64> = (0..n).map(|i| graph.strength(i)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut weight_to = vec![0.0; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut q = *trace.last().expect("trace seeded");
    let mut any_move = false;
    loop {
        let mut moved = false;
        for &node in &order {
            let k = graph.strength(node);
            let own = community[node];
            for &(nb, w) in graph.neighbors(node) {
                let c = community[nb];
                if weight_to[c] == 0.0 {
                    touched.push(c);
                }
                weight_to[c] += w;
            }
            total[own] -= k;
            let gain = |c: usize, w: f64| w / m - total[c] * k / (2.0 * m * m);
            let own_gain = gain(own, weight_to[own]);

            touched.sort_unstable();
            let mut best = (own, own_gain);
            let mut candidate: Option<(usize, f64)> = None;
            for &c in touched.iter().filter(|&&c| c != own) {
                let g = gain(c, weight_to[c]);
                if candidate.is_none_or(|(_, bg)| g > bg) {
                    candidate = Some((c, g));
                }
            }
            if let Some((c, g)) = candidate {
                if g > own_gain + MIN_GAIN {
                    best = (c, g);
                }
            }
            for &c in &touched {
                weight_to[c] = 0.0;
            }
            touched.clear();

            total[best.0] += k;
            if best.0 != own {
                let delta = best.1 - own_gain;
                assert!(delta > 0.0, "accepted Louvain move lowered modularity by {delta}");
                community[node] = best.0;
                q += delta;
                trace.push(q);
                moved = true;
                any_move = true;
            }
        }
        if !moved {
            break;
        }
    }
    (community, any_move)
}
