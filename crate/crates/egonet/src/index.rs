//! Index-based adjacency shared by the measure implementations.
//!
//! People are mapped to `0..n` in sorted-id order so that every algorithm
//! walks nodes in the same canonical order regardless of how the network
//! was built.

use std::collections::{BTreeMap, VecDeque};

use crate::model::{CommunityNetwork, PersonId};

pub(crate) struct Indexed {
    pub ids: Vec<PersonId>,
    pub out_adj: Vec<Vec<usize>>,
    pub in_adj: Vec<Vec<usize>>,
    /// Union of in- and out-neighbors, sorted, deduplicated.
    pub und_adj: Vec<Vec<usize>>,
    pub is_ego: Vec<bool>,
}

impl Indexed {
    pub fn new(net: &CommunityNetwork) -> Self {
        let ids: Vec<PersonId> = net.node_ids().cloned().collect();
        let index: BTreeMap<&PersonId, usize> =
            ids.iter().enumerate().map(|(i, id)| (id, i)).collect();
        let n = ids.len();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for (s, t, _) in net.edges() {
            let (u, v) = (index[s], index[t]);
            out_adj[u].push(v);
            in_adj[v].push(u);
        }
        let mut und_adj = vec![Vec::new(); n];
        for v in 0..n {
            let mut merged = out_adj[v].clone();
            merged.extend_from_slice(&in_adj[v]);
            merged.sort_unstable();
            merged.dedup();
            und_adj[v] = merged;
            out_adj[v].sort_unstable();
            in_adj[v].sort_unstable();
        }
        let is_ego = ids.iter().map(|id| net.is_ego(id)).collect();
        Indexed {
            ids,
            out_adj,
            in_adj,
            und_adj,
            is_ego,
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn index_of(&self, id: &PersonId) -> Option<usize> {
        self.ids.binary_search(id).ok()
    }

    /// Directed BFS distances from `source`; unreachable nodes get `None`.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.len()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for &w in &self.out_adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

/// Raw directed betweenness via shortest-path counting (one BFS per source
/// with backward dependency accumulation). Unreachable pairs contribute 0;
/// no normalisation is applied.
pub(crate) fn betweenness_raw(indexed: &Indexed) -> Vec<f64> {
    let n = indexed.len();
    let mut betweenness = vec![0.0; n];

    for source in 0..n {
        let mut stack: Vec<usize> = Vec::with_capacity(n);
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut sigma = vec![0.0f64; n];
        let mut dist: Vec<i64> = vec![-1; n];
        sigma[source] = 1.0;
        dist[source] = 0;

        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in &indexed.out_adj[v] {
                if dist[w] < 0 {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }

        let mut delta = vec![0.0f64; n];
        while let Some(w) = stack.pop() {
            for &v in &preds[w] {
                delta[v] += (sigma[v] / sigma[w]) * (1.0 + delta[w]);
            }
            if w != source {
                betweenness[w] += delta[w];
            }
        }
    }

    betweenness
}
