use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::graph::{check_assignment, dense_labels, Method, Partition, UGraph};
use crate::error::Result;

/// Smallest decrease in code length, in bits, accepted as an improvement.
const MIN_GAIN: f64 = 1e-12;

/// `x log2 x`, zero for non-positive `x`.
pub fn plogp(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

/// Entropy in bits of the stationary visit rates `strength / 2m`.
pub fn visit_entropy(graph: &UGraph) -> Result<f64> {
    graph.require_edges()?;
    let two_m = 2.0 * graph.total_weight();
    Ok(-(0..graph.node_count())
        .map(|i| plogp(graph.strength(i) / two_m))
        .sum::<f64>())
}

/// Two-level map equation for an undirected weighted graph, in bits.
///
/// Visit rates are `strength / 2m`; a module's exit rate is the weight of
/// edges leaving it divided by `2m`.
pub fn map_equation(graph: &UGraph, assignment: &[usize]) -> Result<f64> {
    check_assignment(graph, assignment)?;
    graph.require_edges()?;
    let (labels, k) = dense_labels(assignment);
    let two_m = 2.0 * graph.total_weight();
    let mut exit = vec![0.0; k];
    let mut flow = vec![0.0; k];
    for &(u, v, w) in graph.edges() {
        if labels[u] != labels[v] {
            exit[labels[u]] += w / two_m;
            exit[labels[v]] += w / two_m;
        }
    }
    let mut node_term = 0.0;
    for i in 0..graph.node_count() {
        let p = graph.strength(i) / two_m;
        flow[labels[i]] += p;
        node_term += plogp(p);
    }
    let total_exit: f64 = exit.iter().sum();
    let module_term: f64 = (0..k)
        .map(|c| plogp(exit[c] + flow[c]) - 2.0 * plogp(exit[c]))
        .sum();
    Ok(plogp(total_exit) + module_term - node_term)
}

/// Greedy two-level Infomap minimizing the map equation.
pub fn infomap(graph: &UGraph, seed: u64) -> Result<Partition> {
    Ok(infomap_traced(graph, seed)?.0)
}

/// Infomap plus the code length after every accepted move, starting with
/// the singleton partition's value.
pub fn infomap_traced(graph: &UGraph, seed: u64) -> Result<(Partition, Vec<f64>)> {
    graph.require_edges()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let node_term = -visit_entropy(graph)?;
    let singletons: Vec<usize> = (0..graph.node_count()).collect();
    let mut trace = vec![map_equation(graph, &singletons)?];
    let mut assignment = singletons;
    let mut level = graph.clone();
    loop {
        let (local, moved) = local_moves(&level, node_term, &mut rng, &mut trace);
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
    let quality = map_equation(graph, &assignment)?;
    Ok((
        Partition {
            assignment,
            count,
            quality,
            method: Method::Infomap,
        },
        trace,
    ))
}

struct Modules {
    exit: Vec<f64>,
    flow: Vec<f64>,
    size: Vec<usize>,
    total_exit: f64,
    /// Sum over modules of `plogp(exit + flow) - 2 plogp(exit)`.
    module_term: f64,
}

impl Modules {
    fn term(exit: f64, flow: f64) -> f64 {
        plogp(exit + flow) - 2.0 * plogp(exit)
    }

    fn length(&self, node_term: f64) -> f64 {
        plogp(self.total_exit) + self.module_term - node_term
    }
}

fn local_moves(graph: &UGraph, node_term: f64, rng: &mut ChaCha8Rng, trace: &mut Vec<f64>) -> (Vec<usize>, bool) {
    let n = graph.node_count();
    let two_m = 2.0 * graph.total_weight();
    let visit: Vec<f64> = (0..n).map(|i| graph.strength(i) / two_m).collect();
    let own_exit: Vec<f64> = (0..n)
        .map(|i| (graph.strength(i) - 2.0 * graph.self_loop(i)) / two_m)
        .collect();
    let mut modules = Modules {
        exit: own_exit.clone(),
        flow: visit.clone(),
        size: vec![1; n],
        total_exit: own_exit.iter().sum(),
        module_term: (0..n).map(|i| Modules::term(own_exit[i], visit[i])).sum(),
    };
    let mut module: Vec<usize> = (0..n).collect();
    let mut empty: BTreeSet<usize> = BTreeSet::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut weight_to = vec![0.0; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut length = *trace.last().expect("trace seeded");
    let mut any_move = false;
    loop {
        let mut moved = false;
        for &node in &order {
            let from = module[node];
            for &(nb, w) in graph.neighbors(node) {
                let c = module[nb];
                if weight_to[c] == 0.0 {
                    touched.push(c);
                }
                weight_to[c] += w / two_m;
            }
            let (p, e) = (visit[node], own_exit[node]);
            let from_exit_after = if modules.size[from] == 1 {
                0.0
            } else {
                (modules.exit[from] - e + 2.0 * weight_to[from]).max(0.0)
            };
            let from_flow_after = if modules.size[from] == 1 { 0.0 } else { modules.flow[from] - p };
            let from_term_before = Modules::term(modules.exit[from], modules.flow[from]);
            let from_term_after = Modules::term(from_exit_after, from_flow_after);

            let mut candidates: Vec<usize> = touched.iter().copied().filter(|&c| c != from).collect();
            if modules.size[from] > 1 {
                if let Some(&fresh) = empty.first() {
                    candidates.push(fresh);
                }
            }
            candidates.sort_unstable();

            let mut best: Option<(usize, f64, f64, f64, f64)> = None;
            for &to in &candidates {
                let to_exit_after = (modules.exit[to] + e - 2.0 * weight_to[to]).max(0.0);
                let to_flow_after = modules.flow[to] + p;
                let total_exit = modules.total_exit - modules.exit[from] - modules.exit[to]
                    + from_exit_after
                    + to_exit_after;
                let module_term = modules.module_term - from_term_before - Modules::term(modules.exit[to], modules.flow[to])
                    + from_term_after
                    + Modules::term(to_exit_after, to_flow_after);
                let new_length = plogp(total_exit) + module_term - node_term;
                if best.is_none_or(|b| new_length < b.1) {
                    best = Some((to, new_length, total_exit, module_term, to_exit_after));
                }
            }
            for &c in &touched {
                weight_to[c] = 0.0;
            }
            touched.clear();

            let Some((to, new_length, total_exit, module_term, to_exit_after)) = best else {
                continue;
            };
            if new_length >= length - MIN_GAIN {
                continue;
            }
            modules.exit[from] = from_exit_after;
            modules.flow[from] = from_flow_after;
            modules.size[from] -= 1;
            if modules.size[from] == 0 {
                empty.insert(from);
            }
            modules.exit[to] = to_exit_after;
            modules.flow[to] += p;
            modules.size[to] += 1;
            empty.remove(&to);
            modules.total_exit = total_exit;
            modules.module_term = module_term;
            module[node] = to;
            assert!(new_length < length, "accepted Infomap move raised code length");
            length = new_length;
            debug_assert!((modules.length(node_term) - length).abs() < 1e-9);
            trace.push(length);
            moved = true;
            any_move = true;
        }
        if !moved {
            break;
        }
    }
    (module, any_move)
}
