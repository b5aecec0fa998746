//! Goods graphs, agents, instances and bundles.
//!
//! Vertices are addressed by their position in the lexicographically sorted
//! id list, so "smallest vertex" and "smallest id" always agree.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::graphs;
use crate::scalar::{share_ratio, total, Scalar};

pub type Vertex = usize;
pub type VertexSet = BTreeSet<Vertex>;
pub type AgentId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodsGraph {
    ids: Vec<String>,
    index: BTreeMap<String, Vertex>,
    adj: Vec<VertexSet>,
}

impl GoodsGraph {
    /// Builds a graph from vertex ids and id pairs. Rejects duplicate ids,
    /// self-loops, duplicate edges and edges with unknown endpoints.
    pub fn new<V, E, A, B>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let mut ids: Vec<String> = vertices.into_iter().map(Into::into).collect();
        ids.sort();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput(format!("duplicate vertex id {:?}", w[0])));
        }
        let index: BTreeMap<String, Vertex> = ids.iter().enumerate().map(|(i, id)| (id.clone(), i)).collect();
        let mut adj = vec![VertexSet::new(); ids.len()];
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            let lookup = |id: &str| {
                index
                    .get(id)
                    .copied()
                    .ok_or_else(|| Error::InvalidInput(format!("edge endpoint {id:?} is not a vertex")))
            };
            let (x, y) = (lookup(a)?, lookup(b)?);
            if x == y {
                return Err(Error::InvalidInput(format!("self-loop at {a:?}")));
            }
            if !adj[x].insert(y) {
                return Err(Error::InvalidInput(format!("duplicate edge {a:?}-{b:?}")));
            }
            adj[y].insert(x);
        }
        Ok(GoodsGraph { ids, index, adj })
    }

    /// Graph on `n` vertices named `v00`, `v01`, ... (zero padded so that
    /// the name order matches the index order).
    pub fn with_indexed_vertices(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let width = n.saturating_sub(1).to_string().len().max(2);
        let name = |i: usize| format!("v{i:0width$}");
        let names: Vec<String> = (0..n).map(name).collect();
        let pairs: Vec<(String, String)> = edges
            .iter()
            .map(|&(a, b)| {
                if a >= n || b >= n {
                    Err(Error::InvalidInput(format!("edge ({a}, {b}) out of range")))
                } else {
                    Ok((name(a), name(b)))
                }
            })
            .collect::<Result<_>>()?;
        Self::new(names, pairs)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, v: Vertex) -> &str {
        &self.ids[v]
    }

    pub fn vertex(&self, id: &str) -> Option<Vertex> {
        self.index.get(id).copied()
    }

    pub fn neighbors(&self, v: Vertex) -> &VertexSet {
        &self.adj[v]
    }

    pub fn adjacent(&self, a: Vertex, b: Vertex) -> bool {
        self.adj[a].contains(&b)
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Edges as `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj.iter().enumerate().flat_map(|(a, ns)| ns.range(a + 1..).map(move |&b| (a, b)))
    }

    pub fn all_vertices(&self) -> VertexSet {
        (0..self.len()).collect()
    }

    pub fn names(&self, set: &VertexSet) -> Vec<&str> {
        set.iter().map(|&v| self.id(v)).collect()
    }

    pub fn lookup_set<'a>(&self, ids: impl IntoIterator<Item = &'a str>) -> Result<VertexSet> {
        ids.into_iter()
            .map(|id| self.vertex(id).ok_or_else(|| Error::InvalidInput(format!("unknown vertex id {id:?}"))))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Agent<S> {
    pub id: AgentId,
    pub type_id: usize,
    /// Value of every vertex, indexed like the graph.
    pub utility: Vec<S>,
}

impl<S: Scalar> Agent<S> {
    pub fn value_of<'a>(&self, set: impl IntoIterator<Item = &'a Vertex>) -> S {
        total(&self.utility, set)
    }
}

/// `u(S)` for an agent; the empty set is worth zero.
pub fn utility_of_set<S: Scalar>(agent: &Agent<S>, set: &VertexSet) -> Result<S> {
    if let Some(&v) = set.iter().find(|&&v| v >= agent.utility.len()) {
        return Err(Error::InvalidInput(format!("vertex index {v} is not in the graph")));
    }
    Ok(agent.value_of(set))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance<S> {
    pub graph: GoodsGraph,
    pub agents: Vec<Agent<S>>,
}

impl<S: Scalar> Instance<S> {
    /// Checks the dense-form invariants: agent ids `1..=n` in order, one
    /// utility per vertex, nonnegative values, and equal utilities for
    /// agents of one type.
    pub fn new(graph: GoodsGraph, agents: Vec<Agent<S>>) -> Result<Self> {
        if agents.is_empty() {
            return Err(Error::InvalidInput("an instance needs at least one agent".into()));
        }
        for (pos, a) in agents.iter().enumerate() {
            if a.id != pos + 1 {
                return Err(Error::InvalidInput(format!(
                    "agent ids must be 1..=n in order, found {} at position {}",
                    a.id,
                    pos + 1
                )));
            }
            if a.utility.len() != graph.len() {
                return Err(Error::InvalidInput(format!(
                    "agent {} has {} utilities for {} vertices",
                    a.id,
                    a.utility.len(),
                    graph.len()
                )));
            }
            if let Some(v) = a.utility.iter().position(Scalar::is_negative_value) {
                return Err(Error::InvalidInput(format!("agent {} has a negative utility on {}", a.id, graph.id(v))));
            }
        }
        for (i, a) in agents.iter().enumerate() {
            for b in &agents[i + 1..] {
                if a.type_id == b.type_id && a.utility != b.utility {
                    return Err(Error::InvalidInput(format!(
                        "agents {} and {} share type {} but differ in utility",
                        a.id, b.id, a.type_id
                    )));
                }
            }
        }
        Ok(Instance { graph, agents })
    }

    /// One agent per utility vector; agents with equal vectors share a type.
    pub fn from_utilities(graph: GoodsGraph, utilities: Vec<Vec<S>>) -> Result<Self> {
        let mut seen: Vec<Vec<S>> = Vec::new();
        let agents = utilities
            .into_iter()
            .enumerate()
            .map(|(i, utility)| {
                let type_id = match seen.iter().position(|u| *u == utility) {
                    Some(t) => t,
                    None => {
                        seen.push(utility.clone());
                        seen.len() - 1
                    }
                };
                Agent { id: i + 1, type_id, utility }
            })
            .collect();
        Self::new(graph, agents)
    }

    pub fn agent(&self, id: AgentId) -> Option<&Agent<S>> {
        id.checked_sub(1).and_then(|i| self.agents.get(i))
    }

    pub fn n(&self) -> usize {
        self.agents.len()
    }

    /// Number of distinct utility functions among the agents.
    pub fn type_count(&self) -> usize {
        let mut distinct: Vec<&Vec<S>> = Vec::new();
        for a in &self.agents {
            if !distinct.contains(&&a.utility) {
                distinct.push(&a.utility);
            }
        }
        distinct.len()
    }
}

/// An agent as read from a file: utilities keyed by vertex id, possibly
/// incomplete or otherwise invalid.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentDraft<S> {
    pub id: AgentId,
    pub type_label: Option<String>,
    pub utilities: BTreeMap<String, S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceDraft<S> {
    pub graph: GoodsGraph,
    pub agents: Vec<AgentDraft<S>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoAgents,
    AgentIds { found: Vec<AgentId> },
    MissingUtility { agent: AgentId, vertex: String },
    UnknownVertex { agent: AgentId, vertex: String },
    NegativeUtility { agent: AgentId, vertex: String },
    TypeMismatch { label: String, first: AgentId, other: AgentId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoAgents => write!(f, "no agents"),
            Violation::AgentIds { found } => write!(f, "agent ids must be 1..=n, found {found:?}"),
            Violation::MissingUtility { agent, vertex } => {
                write!(f, "agent {agent} has no utility for vertex {vertex}")
            }
            Violation::UnknownVertex { agent, vertex } => {
                write!(f, "agent {agent} values unknown vertex {vertex}")
            }
            Violation::NegativeUtility { agent, vertex } => {
                write!(f, "agent {agent} has a negative utility for vertex {vertex}")
            }
            Violation::TypeMismatch { label, first, other } => {
                write!(f, "agents {first} and {other} share type {label:?} but differ in utility")
            }
        }
    }
}

/// Lists every violated invariant; an empty report means the draft builds.
pub fn validate_instance<S: Scalar>(draft: &InstanceDraft<S>) -> Vec<Violation> {
    let mut report = Vec::new();
    if draft.agents.is_empty() {
        report.push(Violation::NoAgents);
    }
    let mut ids: Vec<AgentId> = draft.agents.iter().map(|a| a.id).collect();
    ids.sort_unstable();
    if ids.iter().enumerate().any(|(i, &id)| id != i + 1) {
        report.push(Violation::AgentIds { found: ids });
    }
    for a in &draft.agents {
        for id in draft.graph.ids() {
            if !a.utilities.contains_key(id) {
                report.push(Violation::MissingUtility { agent: a.id, vertex: id.clone() });
            }
        }
        for (id, value) in &a.utilities {
            if draft.graph.vertex(id).is_none() {
                report.push(Violation::UnknownVertex { agent: a.id, vertex: id.clone() });
            }
            if value.is_negative_value() {
                report.push(Violation::NegativeUtility { agent: a.id, vertex: id.clone() });
            }
        }
    }
    let mut by_label: BTreeMap<&str, &AgentDraft<S>> = BTreeMap::new();
    let mut sorted: Vec<&AgentDraft<S>> = draft.agents.iter().collect();
    sorted.sort_by_key(|a| a.id);
    for a in sorted {
        let Some(label) = a.type_label.as_deref() else { continue };
        match by_label.get(label) {
            Some(first) if first.utilities != a.utilities => {
                report.push(Violation::TypeMismatch { label: label.to_string(), first: first.id, other: a.id })
            }
            Some(_) => {}
            None => {
                by_label.insert(label, a);
            }
        }
    }
    report
}

impl<S: Scalar> InstanceDraft<S> {
    /// Validates and converts to the dense form. Labelled agents get type
    /// ids in order of first appearance; unlabelled agents are grouped by
    /// identical utilities.
    pub fn build(self) -> Result<Instance<S>> {
        let report = validate_instance(&self);
        if !report.is_empty() {
            let msg: Vec<String> = report.iter().map(ToString::to_string).collect();
            return Err(Error::InvalidInput(msg.join("; ")));
        }
        let mut drafts = self.agents;
        drafts.sort_by_key(|a| a.id);
        // Type keys: `Some(label)` for labelled agents, otherwise the id of
        // the first unlabelled agent with the same utilities.
        let mut keys: Vec<(Option<String>, AgentId)> = Vec::new();
        let mut agents: Vec<Agent<S>> = Vec::with_capacity(drafts.len());
        for d in drafts {
            let utility: Vec<S> = self.graph.ids().iter().map(|id| d.utilities[id].clone()).collect();
            let key = match d.type_label {
                Some(l) => (Some(l), 0),
                None => {
                    let twin = agents.iter().find(|b| b.utility == utility && keys[b.type_id].0.is_none());
                    (None, twin.map_or(d.id, |b| keys[b.type_id].1))
                }
            };
            let type_id = keys.iter().position(|k| *k == key).unwrap_or_else(|| {
                keys.push(key);
                keys.len() - 1
            });
            agents.push(Agent { id: d.id, type_id, utility });
        }
        Instance::new(self.graph, agents)
    }
}

/// Pairwise-disjoint connected bundles, at most one per agent.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Packing {
    bundles: Vec<(AgentId, VertexSet)>,
}

impl Packing {
    pub fn new(mut bundles: Vec<(AgentId, VertexSet)>) -> Self {
        bundles.sort_by_key(|(a, _)| *a);
        Packing { bundles }
    }

    pub fn bundles(&self) -> &[(AgentId, VertexSet)] {
        &self.bundles
    }

    pub fn bundle(&self, agent: AgentId) -> Option<&VertexSet> {
        self.bundles.iter().find(|(a, _)| *a == agent).map(|(_, s)| s)
    }

    pub fn assigned(&self) -> VertexSet {
        self.bundles.iter().flat_map(|(_, s)| s.iter().copied()).collect()
    }

    pub fn unassigned(&self, graph: &GoodsGraph) -> VertexSet {
        let taken = self.assigned();
        (0..graph.len()).filter(|v| !taken.contains(v)).collect()
    }

    pub fn is_partition(&self, graph: &GoodsGraph) -> bool {
        self.check(graph).is_ok() && self.assigned().len() == graph.len()
    }

    /// Structural validity: bundles in range, disjoint, connected, and at
    /// most one per agent.
    pub fn check(&self, graph: &GoodsGraph) -> Result<()> {
        let mut seen_agents = BTreeSet::new();
        let mut seen = VertexSet::new();
        for (agent, set) in &self.bundles {
            if !seen_agents.insert(*agent) {
                return Err(Error::Structural(format!("agent {agent} holds two bundles")));
            }
            for &v in set {
                if v >= graph.len() {
                    return Err(Error::Structural(format!("vertex index {v} out of range")));
                }
                if !seen.insert(v) {
                    return Err(Error::Structural(format!("vertex {} lies in two bundles", graph.id(v))));
                }
            }
            if !graphs::is_connected_subset(graph, set) {
                return Err(Error::Structural(format!("bundle of agent {agent} is not connected")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Allocation<S> {
    pub packing: Packing,
    pub target_alpha: S,
    /// `u_i(A_i) / mms_i`, or one when `mms_i = 0`.
    pub per_agent_ratio: BTreeMap<AgentId, S>,
}

impl<S: Scalar> Allocation<S> {
    /// Every agent of `inst` appears, with an empty bundle if unserved.
    pub fn from_grants(
        inst: &Instance<S>,
        grants: Vec<(AgentId, VertexSet)>,
        target_alpha: S,
        shares: &BTreeMap<AgentId, S>,
    ) -> Self {
        let mut bundles: BTreeMap<AgentId, VertexSet> = inst.agents.iter().map(|a| (a.id, VertexSet::new())).collect();
        for (a, set) in grants {
            bundles.entry(a).or_default().extend(set);
        }
        let per_agent_ratio = inst
            .agents
            .iter()
            .map(|a| {
                let value = a.value_of(&bundles[&a.id]);
                let share = shares.get(&a.id).cloned().unwrap_or_else(S::zero);
                (a.id, share_ratio(&value, &share))
            })
            .collect();
        Allocation { packing: Packing::new(bundles.into_iter().collect()), target_alpha, per_agent_ratio }
    }

    pub fn min_ratio(&self) -> S {
        self.per_agent_ratio.values().cloned().reduce(|a, b| if b < a { b } else { a }).unwrap_or_else(S::one)
    }
}

/// True iff every vertex is worth strictly less than `alpha * mms_value`.
/// Never holds for a zero share.
pub fn is_alpha_bounded<S: Scalar>(inst: &Instance<S>, agent: &Agent<S>, alpha: &S, mms_value: &S) -> bool {
    if *mms_value <= S::zero() {
        return false;
    }
    let bar = alpha.clone() * mms_value.clone();
    (0..inst.graph.len()).all(|v| agent.utility[v] < bar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Value;

    fn q(n: i64, d: i64) -> Value {
        Value::new(n.into(), d.into())
    }

    fn path3() -> GoodsGraph {
        GoodsGraph::new(["a", "b", "c"], [("a", "b"), ("b", "c")]).unwrap()
    }

    #[test]
    fn utility_of_set_sums_exactly() {
        let g = GoodsGraph::new(["a", "b"], [("a", "b")]).unwrap();
        let agent = Agent { id: 1, type_id: 0, utility: vec![q(1, 1), q(2, 1)] };
        assert_eq!(utility_of_set(&agent, &VertexSet::new()).unwrap(), q(0, 1));
        assert_eq!(utility_of_set(&agent, &g.all_vertices()).unwrap(), q(3, 1));
        let agent = Agent { id: 1, type_id: 0, utility: vec![q(3, 2), q(1, 3)] };
        assert_eq!(utility_of_set(&agent, &g.all_vertices()).unwrap(), q(11, 6));
        assert!(matches!(utility_of_set(&agent, &[5].into_iter().collect()), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn graph_rejects_bad_edges() {
        assert!(GoodsGraph::new(["a"], [("a", "a")]).is_err());
        assert!(GoodsGraph::new(["a", "b"], [("a", "b"), ("b", "a")]).is_err());
        assert!(GoodsGraph::new(["a", "b"], [("a", "z")]).is_err());
        assert!(GoodsGraph::new(["a", "a"], Vec::<(&str, &str)>::new()).is_err());
    }

    #[test]
    fn vertex_order_is_lexicographic() {
        let g = GoodsGraph::new(["b", "a", "c"], [("c", "a")]).unwrap();
        assert_eq!(g.ids(), ["a", "b", "c"]);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 2)]);
    }

    fn draft(utilities: Vec<BTreeMap<String, Value>>) -> InstanceDraft<Value> {
        InstanceDraft {
            graph: path3(),
            agents: utilities
                .into_iter()
                .enumerate()
                .map(|(i, u)| AgentDraft { id: i + 1, type_label: None, utilities: u })
                .collect(),
        }
    }

    fn umap(pairs: &[(&str, i64)]) -> BTreeMap<String, Value> {
        pairs.iter().map(|(k, v)| (k.to_string(), q(*v, 1))).collect()
    }

    #[test]
    fn validation_reports() {
        let ok = draft(vec![umap(&[("a", 1), ("b", 1), ("c", 1)]), umap(&[("a", 0), ("b", 2), ("c", 1)])]);
        assert!(validate_instance(&ok).is_empty());

        let missing = draft(vec![umap(&[("a", 1), ("b", 1)])]);
        assert_eq!(validate_instance(&missing), vec![Violation::MissingUtility { agent: 1, vertex: "c".into() }]);

        let negative = draft(vec![umap(&[("a", 1), ("b", -1), ("c", 1)])]);
        assert_eq!(validate_instance(&negative), vec![Violation::NegativeUtility { agent: 1, vertex: "b".into() }]);
    }

    #[test]
    fn type_labels_must_agree() {
        let mut d = draft(vec![umap(&[("a", 1), ("b", 1), ("c", 1)]), umap(&[("a", 0), ("b", 2), ("c", 1)])]);
        for a in &mut d.agents {
            a.type_label = Some("t".into());
        }
        assert!(matches!(validate_instance(&d)[..], [Violation::TypeMismatch { .. }]));
    }

    #[test]
    fn build_groups_unlabelled_agents_by_utility() {
        let u = umap(&[("a", 1), ("b", 1), ("c", 1)]);
        let inst = draft(vec![u.clone(), umap(&[("a", 2), ("b", 1), ("c", 1)]), u]).build().unwrap();
        let types: Vec<usize> = inst.agents.iter().map(|a| a.type_id).collect();
        assert_eq!(types, vec![0, 1, 0]);
        assert_eq!(inst.type_count(), 2);
    }

    #[test]
    fn alpha_bounded_checks() {
        let g = GoodsGraph::with_indexed_vertices(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let inst = Instance::from_utilities(g, vec![vec![q(1, 1); 5]]).unwrap();
        let a = &inst.agents[0];
        assert!(is_alpha_bounded(&inst, a, &q(1, 2), &q(5, 1)));
        assert!(!is_alpha_bounded(&inst, a, &q(1, 2), &q(0, 1)));

        let mut u = vec![q(1, 1); 5];
        u[2] = q(10, 1);
        let inst = Instance::from_utilities(inst.graph.clone(), vec![u]).unwrap();
        assert!(!is_alpha_bounded(&inst, &inst.agents[0], &q(1, 2), &q(4, 1)));
    }

    #[test]
    fn packing_structure() {
        let g = path3();
        let p = Packing::new(vec![(1, [0, 1].into()), (2, [2].into())]);
        assert!(p.is_partition(&g));
        let gap = Packing::new(vec![(1, [0, 2].into())]);
        assert!(gap.check(&g).is_err());
        let overlap = Packing::new(vec![(1, [0, 1].into()), (2, [1].into())]);
        assert!(overlap.check(&g).is_err());
        let partial = Packing::new(vec![(1, [1].into()), (2, VertexSet::new())]);
        assert!(partial.check(&g).is_ok());
        assert!(!partial.is_partition(&g));
        assert_eq!(partial.unassigned(&g), [0, 2].into());
    }
}
