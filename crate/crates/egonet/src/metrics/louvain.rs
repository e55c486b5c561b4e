//! Seeded greedy modularity optimisation (Louvain-style) on the
//! undirected projection with unit edge weights.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::metrics::MetricError;
use crate::model::{CommunityNetwork, PersonId};
use crate::views::undirected_projection;

/// Outcome of a modularity optimisation run.
#[derive(Debug, Clone, PartialEq)]
pub struct ModularityResult {
    /// Modularity Q of the final partition, in [-0.5, 1].
    pub score: f64,
    pub community_count: usize,
    /// Seed that drove the node visiting order.
    pub seed: u64,
    /// Node to community index (communities numbered by first appearance
    /// in sorted node order).
    pub partition: BTreeMap<PersonId, usize>,
}

/// Weighted working graph; aggregation introduces self-loops, stored once
/// with degree contribution 2w.
struct WorkGraph {
    adj: Vec<BTreeMap<usize, f64>>,
    degree: Vec<f64>,
    two_m: f64,
}

impl WorkGraph {
    fn node_count(&self) -> usize {
        self.adj.len()
    }
}

/// Runs seeded greedy modularity optimisation.
///
/// The node visiting order of each level is a seeded shuffle of the
/// canonically sorted nodes, so identical inputs and seeds give identical
/// partitions.
pub fn modularity(net: &CommunityNetwork, seed: u64) -> Result<ModularityResult, MetricError> {
    let graph = undirected_projection(net);
    let n = graph.node_count();
    if n < 2 {
        return Err(MetricError::TooFewNodes { needed: 2, got: n });
    }
    if graph.edge_count() == 0 {
        return Err(MetricError::NoEdges);
    }

    let mut work = WorkGraph {
        adj: (0..n)
            .map(|v| graph.neighbors(v).iter().map(|&w| (w, 1.0)).collect())
            .collect(),
        degree: (0..n).map(|v| graph.degree(v) as f64).collect(),
        two_m: 2.0 * graph.edge_count() as f64,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // membership[v] = community of original node v, expressed as a node of
    // the current working graph.
    let mut membership: Vec<usize> = (0..n).collect();

    loop {
        let (node_to_comm, moved) = local_move(&work, &mut rng);
        if !moved {
            break;
        }
        let (aggregated, remap) = aggregate(&work, &node_to_comm);
        for m in &mut membership {
            *m = remap[node_to_comm[*m]];
        }
        if aggregated.node_count() == work.node_count() {
            work = aggregated;
            break;
        }
        work = aggregated;
    }

    // Canonical community numbering by first appearance in node order.
    let mut renumber: BTreeMap<usize, usize> = BTreeMap::new();
    let mut canonical = Vec::with_capacity(n);
    for &m in &membership {
        let next = renumber.len();
        canonical.push(*renumber.entry(m).or_insert(next));
    }

    let score = partition_modularity(&graph, &canonical);
    let partition: BTreeMap<PersonId, usize> = graph
        .ids()
        .iter()
        .enumerate()
        .map(|(v, id)| (id.clone(), canonical[v]))
        .collect();

    Ok(ModularityResult {
        score,
        community_count: renumber.len(),
        seed,
        partition,
    })
}

/// Modularity Q of an explicit partition of the undirected projection:
/// sum over communities of e_c/m - (d_c/2m)^2.
pub(crate) fn partition_modularity(graph: &crate::views::SimpleGraph, communities: &[usize]) -> f64 {
    let m = graph.edge_count() as f64;
    if m == 0.0 {
        return 0.0;
    }
    let k = communities.iter().max().map_or(0, |&c| c + 1);
    let mut intra = vec![0.0f64; k];
    let mut total_degree = vec![0.0f64; k];
    for v in 0..graph.node_count() {
        total_degree[communities[v]] += graph.degree(v) as f64;
        for &w in graph.neighbors(v) {
            if v < w && communities[v] == communities[w] {
                intra[communities[v]] += 1.0;
            }
        }
    }
    (0..k)
        .map(|c| intra[c] / m - (total_degree[c] / (2.0 * m)).powi(2))
        .sum()
}

/// One level of local moving; returns the community of each node and
/// whether anything moved.
fn local_move(work: &WorkGraph, rng: &mut ChaCha8Rng) -> (Vec<usize>, bool) {
    let n = work.node_count();
    let mut comm: Vec<usize> = (0..n).collect();
    let mut comm_total: Vec<f64> = work.degree.clone();

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut moved_any = false;
    loop {
        let mut moved_this_sweep = false;
        for &v in &order {
            let old = comm[v];
            comm_total[old] -= work.degree[v];

            // Weight from v to each adjacent community (self-loops excluded:
            // they move together with v).
            let mut to_comm: BTreeMap<usize, f64> = BTreeMap::new();
            for (&u, &w) in &work.adj[v] {
                if u != v {
                    *to_comm.entry(comm[u]).or_insert(0.0) += w;
                }
            }

            let stay_gain = to_comm.get(&old).copied().unwrap_or(0.0)
                - comm_total[old] * work.degree[v] / work.two_m;
            let mut best = (old, stay_gain);
            for (&c, &k_vc) in &to_comm {
                let gain = k_vc - comm_total[c] * work.degree[v] / work.two_m;
                // Strictly-better moves only; BTreeMap order makes the
                // lowest community id win among exact ties.
                if gain > best.1 + 1e-12 {
                    best = (c, gain);
                }
            }

            comm_total[best.0] += work.degree[v];
            if best.0 != old {
                comm[v] = best.0;
                moved_this_sweep = true;
                moved_any = true;
            }
        }
        if !moved_this_sweep {
            break;
        }
    }
    (comm, moved_any)
}

/// Collapses communities into single nodes, summing edge weights; intra
/// weight becomes a self-loop.
fn aggregate(work: &WorkGraph, comm: &[usize]) -> (WorkGraph, BTreeMap<usize, usize>) {
    let mut remap: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in comm {
        let next = remap.len();
        remap.entry(c).or_insert(next);
    }
    let k = remap.len();
    let mut adj: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); k];
    for v in 0..work.node_count() {
        let cv = remap[&comm[v]];
        for (&u, &w) in &work.adj[v] {
            let cu = remap[&comm[u]];
            if u == v {
                // Stored-once self-loop stays stored once.
                *adj[cv].entry(cv).or_insert(0.0) += w;
            } else if cu == cv {
                // Each intra edge visited from both endpoints: half each.
                *adj[cv].entry(cv).or_insert(0.0) += w / 2.0;
            } else {
                *adj[cv].entry(cu).or_insert(0.0) += w;
            }
        }
    }
    let degree: Vec<f64> = (0..k)
        .map(|c| {
            adj[c]
                .iter()
                .map(|(&u, &w)| if u == c { 2.0 * w } else { w })
                .sum()
        })
        .collect();
    (
        WorkGraph {
            adj,
            degree,
            two_m: work.two_m,
        },
        remap,
    )
}
