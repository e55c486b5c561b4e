//! Derived network views: ego-only subgraph, counterfactual tie removal,
//! component pruning, and the undirected projection.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::model::{CommunityNetwork, NetError, PersonId, TieLabelSet};

/// Predicate selecting which edges a counterfactual view removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CounterfactualPolicy {
    /// Remove every tie created through project participation
    /// (`from_project` set), whatever else it is labelled as.
    #[default]
    FromProject,
    /// Remove ties matching an arbitrary label predicate.
    Custom(fn(&TieLabelSet) -> bool),
}

impl CounterfactualPolicy {
    fn removes(&self, labels: &TieLabelSet) -> bool {
        match self {
            CounterfactualPolicy::FromProject => labels.from_project,
            CounterfactualPolicy::Custom(pred) => pred(labels),
        }
    }
}

/// Subgraph induced on the egos: alters and their incident edges drop out.
pub fn whole_view(net: &CommunityNetwork) -> CommunityNetwork {
    let egos = net.egos().clone();
    let nodes: BTreeMap<PersonId, _> = net
        .nodes()
        .filter(|(id, _)| egos.contains(*id))
        .map(|(id, attrs)| (id.clone(), attrs.clone()))
        .collect();
    let edges: BTreeMap<(PersonId, PersonId), TieLabelSet> = net
        .edges()
        .filter(|(s, t, _)| egos.contains(*s) && egos.contains(*t))
        .map(|(s, t, l)| ((s.clone(), t.clone()), *l))
        .collect();
    CommunityNetwork::from_parts(nodes, egos, BTreeSet::new(), edges)
}

/// Removes every edge the policy selects; the node set is unchanged, so
/// isolates produced by the removal stay in the network and show up as
/// fragmentation instead of silently disappearing.
pub fn counterfactual_view(
    net: &CommunityNetwork,
    policy: CounterfactualPolicy,
) -> CommunityNetwork {
    let nodes = net
        .nodes()
        .map(|(id, attrs)| (id.clone(), attrs.clone()))
        .collect();
    let edges = net
        .edges()
        .filter(|(_, _, labels)| !policy.removes(labels))
        .map(|(s, t, l)| ((s.clone(), t.clone()), *l))
        .collect();
    CommunityNetwork::from_parts(nodes, net.egos().clone(), net.alters().clone(), edges)
}

/// Which weakly connected components a pruned network keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrunePolicy {
    /// Keep only the largest component; equal sizes break ties by the
    /// smallest contained id.
    KeepLargest,
    /// Keep every component with at least `k` nodes.
    MinSize(usize),
}

/// What a pruning pass removed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruneReport {
    /// Removed components as (size, sorted member ids), largest first.
    pub removed_components: Vec<(usize, Vec<PersonId>)>,
    pub removed_node_count: usize,
    pub removed_edge_count: usize,
}

/// Drops small weakly connected components according to the policy.
///
/// Connectivity ignores edge direction. Returns the retained network and a
/// report accounting for everything removed.
pub fn prune_components(
    net: &CommunityNetwork,
    policy: PrunePolicy,
) -> Result<(CommunityNetwork, PruneReport), NetError> {
    let components = weak_components(net);

    let keep: Vec<bool> = match policy {
        PrunePolicy::KeepLargest => {
            // Components are produced in order of their smallest id, so
            // `max_by_key` on size keeps the earliest (smallest-id) one
            // among equals.
            let best = components
                .iter()
                .enumerate()
                .max_by(|(ia, a), (ib, b)| a.len().cmp(&b.len()).then(ib.cmp(ia)))
                .map(|(i, _)| i);
            (0..components.len()).map(|i| Some(i) == best).collect()
        }
        PrunePolicy::MinSize(k) => components.iter().map(|c| c.len() >= k).collect(),
    };

    let mut retained: BTreeSet<PersonId> = BTreeSet::new();
    let mut report = PruneReport::default();
    for (component, keep) in components.iter().zip(&keep) {
        if *keep {
            retained.extend(component.iter().cloned());
        } else {
            report
                .removed_components
                .push((component.len(), component.iter().cloned().collect()));
            report.removed_node_count += component.len();
        }
    }
    report
        .removed_components
        .sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));

    if retained.is_empty() && net.node_count() > 0 {
        return Err(NetError::EmptyResult);
    }

    let nodes: BTreeMap<PersonId, _> = net
        .nodes()
        .filter(|(id, _)| retained.contains(*id))
        .map(|(id, attrs)| (id.clone(), attrs.clone()))
        .collect();
    let egos: BTreeSet<PersonId> = net.egos().intersection(&retained).cloned().collect();
    let alters: BTreeSet<PersonId> = net.alters().intersection(&retained).cloned().collect();
    let edges: BTreeMap<(PersonId, PersonId), TieLabelSet> = net
        .edges()
        .filter(|(s, t, _)| retained.contains(*s) && retained.contains(*t))
        .map(|(s, t, l)| ((s.clone(), t.clone()), *l))
        .collect();
    report.removed_edge_count = net.edge_count() - edges.len();

    Ok((
        CommunityNetwork::from_parts(nodes, egos, alters, edges),
        report,
    ))
}

/// Weakly connected components, each sorted, ordered by smallest member id.
fn weak_components(net: &CommunityNetwork) -> Vec<BTreeSet<PersonId>> {
    let graph = undirected_projection(net);
    let n = graph.node_count();
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut component = BTreeSet::new();
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            component.insert(graph.id(v).clone());
            for &w in graph.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        components.push(component);
    }
    components
}

/// Simple undirected graph over the same people: `{u, v}` is an edge iff
/// either directed edge exists. Nodes are indexed in sorted-id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    ids: Vec<PersonId>,
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl SimpleGraph {
    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn id(&self, index: usize) -> &PersonId {
        &self.ids[index]
    }

    pub fn ids(&self) -> &[PersonId] {
        &self.ids
    }

    /// Sorted neighbor indices of `index`.
    pub fn neighbors(&self, index: usize) -> &[usize] {
        &self.adj[index]
    }

    pub fn degree(&self, index: usize) -> usize {
        self.adj[index].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }
}

/// Forgets direction and labels: the shared basis for transitivity,
/// modularity, core/periphery, fragmentation, and component analysis.
pub fn undirected_projection(net: &CommunityNetwork) -> SimpleGraph {
    let ids: Vec<PersonId> = net.node_ids().cloned().collect();
    let index: BTreeMap<&PersonId, usize> = ids.iter().enumerate().map(|(i, id)| (id, i)).collect();
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (s, t, _) in net.edges() {
        let (u, v) = (index[s], index[t]);
        pairs.insert((u.min(v), u.max(v)));
    }
    let mut adj = vec![Vec::new(); ids.len()];
    for &(u, v) in &pairs {
        adj[u].push(v);
        adj[v].push(u);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    SimpleGraph {
        ids,
        adj,
        edge_count: pairs.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_network, PersonAttributes};

    fn friend() -> TieLabelSet {
        TieLabelSet {
            friend: true,
            ..Default::default()
        }
    }

    fn project_friend() -> TieLabelSet {
        TieLabelSet {
            friend: true,
            from_project: true,
            ..Default::default()
        }
    }

    fn net_with(
        egos: &[&str],
        ties: &[(&str, &str, TieLabelSet)],
    ) -> CommunityNetwork {
        build_network(
            egos.iter()
                .map(|e| ((*e).into(), PersonAttributes::default()))
                .collect(),
            ties.iter()
                .map(|(s, t, l)| ((*s).into(), (*t).into(), *l))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn whole_view_drops_alters() {
        let net = net_with(
            &["e1", "e2"],
            &[("e1", "e2", friend()), ("e1", "a", friend())],
        );
        let whole = whole_view(&net);
        assert_eq!(whole.node_count(), 2);
        assert_eq!(whole.edge_count(), 1);
        assert_eq!(whole.alter_count(), 0);
    }

    #[test]
    fn whole_view_keeps_isolated_egos() {
        let net = net_with(&["e1", "e2", "e3"], &[("e1", "a", friend())]);
        let whole = whole_view(&net);
        assert_eq!(whole.node_count(), 3);
        assert_eq!(whole.edge_count(), 0);
    }

    #[test]
    fn whole_view_is_idempotent() {
        let net = net_with(
            &["e1", "e2"],
            &[("e1", "e2", friend()), ("e2", "a", friend())],
        );
        let once = whole_view(&net);
        assert_eq!(whole_view(&once), once);
    }

    #[test]
    fn counterfactual_removes_project_ties_only() {
        let net = net_with(
            &["e1", "e2", "e3"],
            &[
                ("e1", "e2", project_friend()),
                ("e2", "e3", friend()),
            ],
        );
        let cf = counterfactual_view(&net, CounterfactualPolicy::FromProject);
        assert_eq!(cf.node_count(), net.node_count());
        assert_eq!(cf.edge_count(), 1);
        assert!(!cf.has_edge(&"e1".into(), &"e2".into()));
        assert!(cf.has_edge(&"e2".into(), &"e3".into()));
    }

    #[test]
    fn counterfactual_is_identity_without_project_ties() {
        let net = net_with(&["e1", "e2"], &[("e1", "e2", friend())]);
        let cf = counterfactual_view(&net, CounterfactualPolicy::FromProject);
        assert_eq!(cf, net);
    }

    #[test]
    fn counterfactual_is_idempotent() {
        let net = net_with(
            &["e1", "e2"],
            &[("e1", "e2", project_friend()), ("e2", "e1", friend())],
        );
        let once = counterfactual_view(&net, CounterfactualPolicy::FromProject);
        let twice = counterfactual_view(&once, CounterfactualPolicy::FromProject);
        assert_eq!(once, twice);
    }

    #[test]
    fn prune_keeps_largest_component() {
        let net = net_with(
            &["a1", "a2", "a3", "b1", "b2"],
            &[
                ("a1", "a2", friend()),
                ("a2", "a3", friend()),
                ("b1", "b2", friend()),
            ],
        );
        let (pruned, report) = prune_components(&net, PrunePolicy::KeepLargest).unwrap();
        assert_eq!(pruned.node_count(), 3);
        assert_eq!(report.removed_node_count, 2);
        assert_eq!(report.removed_edge_count, 1);
        assert_eq!(report.removed_components.len(), 1);
        assert_eq!(report.removed_components[0].0, 2);
    }

    #[test]
    fn prune_breaks_size_ties_by_smallest_id() {
        let net = net_with(
            &["a1", "a2", "b1", "b2"],
            &[("a1", "a2", friend()), ("b1", "b2", friend())],
        );
        let (pruned, _) = prune_components(&net, PrunePolicy::KeepLargest).unwrap();
        assert!(pruned.contains(&"a1".into()));
        assert!(!pruned.contains(&"b1".into()));
    }

    #[test]
    fn prune_min_size_one_is_identity() {
        let net = net_with(&["e1", "e2", "e3"], &[("e1", "e2", friend())]);
        let (pruned, report) = prune_components(&net, PrunePolicy::MinSize(1)).unwrap();
        assert_eq!(pruned, net);
        assert_eq!(report.removed_node_count, 0);
        assert_eq!(report.removed_edge_count, 0);
    }

    #[test]
    fn prune_can_empty_the_network() {
        let net = net_with(&["e1", "e2"], &[("e1", "e2", friend())]);
        let err = prune_components(&net, PrunePolicy::MinSize(10)).unwrap_err();
        assert_eq!(err, NetError::EmptyResult);
    }

    #[test]
    fn prune_conserves_counts() {
        let net = net_with(
            &["a1", "a2", "a3", "b1", "b2", "c1"],
            &[
                ("a1", "a2", friend()),
                ("a2", "a3", friend()),
                ("a3", "a1", friend()),
                ("b1", "b2", friend()),
                ("b1", "x", friend()),
            ],
        );
        let (pruned, report) = prune_components(&net, PrunePolicy::KeepLargest).unwrap();
        assert_eq!(
            pruned.node_count() + report.removed_node_count,
            net.node_count()
        );
        assert_eq!(
            pruned.edge_count() + report.removed_edge_count,
            net.edge_count()
        );
    }

    #[test]
    fn projection_merges_reciprocated_edges() {
        let net = net_with(
            &["e1", "e2"],
            &[("e1", "e2", friend()), ("e2", "e1", friend())],
        );
        let graph = undirected_projection(&net);
        assert_eq!(graph.edge_count(), 1);
        assert!(graph.has_edge(0, 1));
    }

    #[test]
    fn projection_of_directed_cycle_is_a_triangle() {
        let net = net_with(
            &["e1", "e2", "e3"],
            &[
                ("e1", "e2", friend()),
                ("e2", "e3", friend()),
                ("e3", "e1", friend()),
            ],
        );
        let graph = undirected_projection(&net);
        assert_eq!(graph.edge_count(), 3);
    }

    #[test]
    fn projection_of_empty_edge_set_is_empty() {
        let net = net_with(&["e1", "e2"], &[]);
        let graph = undirected_projection(&net);
        assert_eq!(graph.edge_count(), 0);
        assert_eq!(graph.node_count(), 2);
    }
}
