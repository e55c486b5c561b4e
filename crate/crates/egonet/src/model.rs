//! Core data model: people, tie labels, and the community network.
//!
//! A [`CommunityNetwork`] is a directed graph whose nodes are split into
//! *egos* (survey respondents, free to have in- and out-edges) and *alters*
//! (people who were only mentioned; they never have outgoing edges). Every
//! edge carries a [`TieLabelSet`] describing the kind of relationship and
//! its provenance.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Canonical identifier of a person (post alias resolution).
///
/// Ordering is lexicographic on the underlying string; every deterministic
/// tie-break in the crate relies on it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PersonId(String);

impl PersonId {
    pub fn new(id: impl Into<String>) -> Self {
        PersonId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PersonId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for PersonId {
    fn from(s: &str) -> Self {
        PersonId(s.to_string())
    }
}

impl From<String> for PersonId {
    fn from(s: String) -> Self {
        PersonId(s)
    }
}

/// Node attributes carried by every person in a network.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PersonAttributes {
    /// Free-vocabulary gender label; empty means unknown.
    #[serde(default)]
    pub gender: String,
    /// Projects the person participates in.
    #[serde(default)]
    pub projects: BTreeSet<String>,
    /// Free-form role tags (`key=value` tags feed custom assortativity).
    #[serde(default)]
    pub role_tags: BTreeSet<String>,
    /// True iff the person answered the questionnaire, i.e. is an ego.
    #[serde(default)]
    pub is_respondent: bool,
}

/// Per-edge relationship flags.
///
/// The four social labels describe what kind of tie it is; the two
/// provenance flags record whether the tie was created through project
/// participation or existed beforehand. A stored edge always has at least
/// one flag set.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TieLabelSet {
    #[serde(default)]
    pub family: bool,
    #[serde(default)]
    pub friend: bool,
    #[serde(default)]
    pub coworker: bool,
    #[serde(default)]
    pub other: bool,
    #[serde(default)]
    pub from_project: bool,
    #[serde(default)]
    pub pre_existing: bool,
}

impl TieLabelSet {
    /// True iff no flag is set.
    pub fn is_empty(&self) -> bool {
        !(self.family
            || self.friend
            || self.coworker
            || self.other
            || self.from_project
            || self.pre_existing)
    }

    /// Flag-wise union; duplicate mentions of the same tie merge this way.
    pub fn union(&self, other: &TieLabelSet) -> TieLabelSet {
        TieLabelSet {
            family: self.family || other.family,
            friend: self.friend || other.friend,
            coworker: self.coworker || other.coworker,
            other: self.other || other.other,
            from_project: self.from_project || other.from_project,
            pre_existing: self.pre_existing || other.pre_existing,
        }
    }

    /// Flag names in canonical column order.
    pub const FLAG_NAMES: [&'static str; 6] = [
        "family",
        "friend",
        "coworker",
        "other",
        "from_project",
        "pre_existing",
    ];

    /// Flags in the same order as [`Self::FLAG_NAMES`].
    pub fn flags(&self) -> [bool; 6] {
        [
            self.family,
            self.friend,
            self.coworker,
            self.other,
            self.from_project,
            self.pre_existing,
        ]
    }
}

/// Errors raised while constructing or deriving networks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetError {
    #[error("self loop on {0}")]
    SelfLoop(PersonId),
    #[error("empty label set on tie {0} -> {1}")]
    EmptyLabelSet(PersonId, PersonId),
    #[error("duplicate respondent id {0}")]
    DuplicateRespondentId(PersonId),
    #[error("tie source {0} is not a respondent")]
    NonRespondentSource(PersonId),
    #[error("pruning removed every node")]
    EmptyResult,
}

/// Directed community network with an ego/alter node partition.
///
/// Invariants held by every constructed or derived value:
/// - egos and alters partition the node set;
/// - alters have out-degree 0;
/// - no self-loops, at most one edge per ordered pair;
/// - every edge label set is non-empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommunityNetwork {
    nodes: BTreeMap<PersonId, PersonAttributes>,
    egos: BTreeSet<PersonId>,
    alters: BTreeSet<PersonId>,
    edges: BTreeMap<(PersonId, PersonId), TieLabelSet>,
}

impl CommunityNetwork {
    pub(crate) fn from_parts(
        nodes: BTreeMap<PersonId, PersonAttributes>,
        egos: BTreeSet<PersonId>,
        alters: BTreeSet<PersonId>,
        edges: BTreeMap<(PersonId, PersonId), TieLabelSet>,
    ) -> Self {
        let net = CommunityNetwork {
            nodes,
            egos,
            alters,
            edges,
        };
        debug_assert!(net.check_invariants().is_ok());
        net
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn ego_count(&self) -> usize {
        self.egos.len()
    }

    pub fn alter_count(&self) -> usize {
        self.alters.len()
    }

    pub fn egos(&self) -> &BTreeSet<PersonId> {
        &self.egos
    }

    pub fn alters(&self) -> &BTreeSet<PersonId> {
        &self.alters
    }

    pub fn is_ego(&self, id: &PersonId) -> bool {
        self.egos.contains(id)
    }

    pub fn contains(&self, id: &PersonId) -> bool {
        self.nodes.contains_key(id)
    }

    pub fn attributes(&self, id: &PersonId) -> Option<&PersonAttributes> {
        self.nodes.get(id)
    }

    /// Nodes in canonical (sorted) order.
    pub fn node_ids(&self) -> impl Iterator<Item = &PersonId> {
        self.nodes.keys()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&PersonId, &PersonAttributes)> {
        self.nodes.iter()
    }

    /// Directed edges in canonical (source, target) order.
    pub fn edges(&self) -> impl Iterator<Item = (&PersonId, &PersonId, &TieLabelSet)> {
        self.edges.iter().map(|((s, t), l)| (s, t, l))
    }

    pub fn has_edge(&self, source: &PersonId, target: &PersonId) -> bool {
        self.edges
            .contains_key(&(source.clone(), target.clone()))
    }

    pub fn labels(&self, source: &PersonId, target: &PersonId) -> Option<&TieLabelSet> {
        self.edges.get(&(source.clone(), target.clone()))
    }

    pub(crate) fn edge_map(&self) -> &BTreeMap<(PersonId, PersonId), TieLabelSet> {
        &self.edges
    }

    /// Verifies every structural invariant; used by tests and debug builds.
    pub fn check_invariants(&self) -> Result<(), String> {
        if !self.egos.is_disjoint(&self.alters) {
            return Err("ego and alter sets overlap".into());
        }
        if self.egos.len() + self.alters.len() != self.nodes.len() {
            return Err("ego/alter partition does not cover the node set".into());
        }
        for id in self.egos.iter().chain(self.alters.iter()) {
            if !self.nodes.contains_key(id) {
                return Err(format!("{id} missing from the node map"));
            }
        }
        for ((s, t), labels) in &self.edges {
            if s == t {
                return Err(format!("self loop on {s}"));
            }
            if !self.nodes.contains_key(s) || !self.nodes.contains_key(t) {
                return Err(format!("edge {s} -> {t} references a missing node"));
            }
            if self.alters.contains(s) {
                return Err(format!("alter {s} has an outgoing edge"));
            }
            if labels.is_empty() {
                return Err(format!("edge {s} -> {t} has an empty label set"));
            }
        }
        Ok(())
    }
}

/// Assembles a network from respondent records and their mentioned ties.
///
/// Respondents become egos; mentioned targets that are not respondents
/// become alters with default attributes. Duplicate mentions of the same
/// ordered pair merge by label-set union.
pub fn build_network(
    respondents: Vec<(PersonId, PersonAttributes)>,
    ties: Vec<(PersonId, PersonId, TieLabelSet)>,
) -> Result<CommunityNetwork, NetError> {
    let mut nodes: BTreeMap<PersonId, PersonAttributes> = BTreeMap::new();
    let mut egos: BTreeSet<PersonId> = BTreeSet::new();

    for (id, mut attrs) in respondents {
        if egos.contains(&id) {
            return Err(NetError::DuplicateRespondentId(id));
        }
        attrs.is_respondent = true;
        egos.insert(id.clone());
        nodes.insert(id, attrs);
    }

    let mut edges: BTreeMap<(PersonId, PersonId), TieLabelSet> = BTreeMap::new();
    let mut alters: BTreeSet<PersonId> = BTreeSet::new();

    for (source, target, labels) in ties {
        if source == target {
            return Err(NetError::SelfLoop(source));
        }
        if labels.is_empty() {
            return Err(NetError::EmptyLabelSet(source, target));
        }
        if !egos.contains(&source) {
            return Err(NetError::NonRespondentSource(source));
        }
        if !egos.contains(&target) && !alters.contains(&target) {
            alters.insert(target.clone());
            nodes.insert(target.clone(), PersonAttributes::default());
        }
        edges
            .entry((source, target))
            .and_modify(|existing| *existing = existing.union(&labels))
            .or_insert(labels);
    }

    Ok(CommunityNetwork::from_parts(nodes, egos, alters, edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn attrs() -> PersonAttributes {
        PersonAttributes::default()
    }

    fn friend() -> TieLabelSet {
        TieLabelSet {
            friend: true,
            ..Default::default()
        }
    }

    #[test]
    fn builds_minimal_network() {
        let net = build_network(
            vec![("e1".into(), attrs()), ("e2".into(), attrs())],
            vec![
                ("e1".into(), "e2".into(), friend()),
                (
                    "e1".into(),
                    "a".into(),
                    TieLabelSet {
                        family: true,
                        ..Default::default()
                    },
                ),
            ],
        )
        .unwrap();

        assert_eq!(net.ego_count(), 2);
        assert_eq!(net.alter_count(), 1);
        assert_eq!(net.edge_count(), 2);
        assert!(net.is_ego(&"e1".into()));
        assert!(!net.is_ego(&"a".into()));
        net.check_invariants().unwrap();
    }

    #[test]
    fn duplicate_ties_merge_labels() {
        let net = build_network(
            vec![("e1".into(), attrs()), ("e2".into(), attrs())],
            vec![
                ("e1".into(), "e2".into(), friend()),
                (
                    "e1".into(),
                    "e2".into(),
                    TieLabelSet {
                        coworker: true,
                        ..Default::default()
                    },
                ),
            ],
        )
        .unwrap();

        assert_eq!(net.edge_count(), 1);
        let labels = net.labels(&"e1".into(), &"e2".into()).unwrap();
        assert!(labels.friend && labels.coworker);
        assert!(!labels.family);
    }

    #[test]
    fn rejects_self_loop() {
        let err = build_network(
            vec![("e1".into(), attrs())],
            vec![("e1".into(), "e1".into(), friend())],
        )
        .unwrap_err();
        assert_eq!(err, NetError::SelfLoop("e1".into()));
    }

    #[test]
    fn rejects_empty_label_set() {
        let err = build_network(
            vec![("e1".into(), attrs())],
            vec![("e1".into(), "x".into(), TieLabelSet::default())],
        )
        .unwrap_err();
        assert_eq!(err, NetError::EmptyLabelSet("e1".into(), "x".into()));
    }

    #[test]
    fn rejects_duplicate_respondent() {
        let err = build_network(
            vec![("e1".into(), attrs()), ("e1".into(), attrs())],
            vec![],
        )
        .unwrap_err();
        assert_eq!(err, NetError::DuplicateRespondentId("e1".into()));
    }

    #[test]
    fn rejects_non_respondent_source() {
        let err = build_network(
            vec![("e1".into(), attrs())],
            vec![("ghost".into(), "e1".into(), friend())],
        )
        .unwrap_err();
        assert_eq!(err, NetError::NonRespondentSource("ghost".into()));
    }

    #[test]
    fn mention_of_another_respondent_is_not_an_alter() {
        let net = build_network(
            vec![("e1".into(), attrs()), ("e2".into(), attrs())],
            vec![("e1".into(), "e2".into(), friend())],
        )
        .unwrap();
        assert_eq!(net.alter_count(), 0);
    }
}
