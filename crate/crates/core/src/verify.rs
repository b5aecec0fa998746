//! Certification of an allocation against given maximin shares. Nothing in
//! here calls an allocator; the checks see only the instance, the bundles
//! and the share records.

use std::collections::BTreeMap;

use crate::graphs::is_connected_subset;
use crate::model::{AgentId, Allocation, Instance, VertexSet};
use crate::oracle::MmsRecord;
use crate::scalar::{share_ratio, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct AgentLine<S> {
    pub agent: AgentId,
    pub bundle: VertexSet,
    pub value: S,
    pub mms: S,
    pub ratio: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate<S> {
    pub alpha_target: S,
    pub per_agent: Vec<AgentLine<S>>,
    pub min_ratio: S,
    pub structural_ok: bool,
    pub notes: Vec<String>,
}

impl<S: Scalar> Certificate<S> {
    pub fn passes(&self) -> bool {
        self.structural_ok && self.min_ratio >= self.alpha_target
    }
}

pub fn check_allocation<S: Scalar>(
    inst: &Instance<S>,
    alloc: &Allocation<S>,
    alpha: &S,
    records: &[MmsRecord<S>],
) -> Certificate<S> {
    let graph = &inst.graph;
    let mut notes = Vec::new();
    let mut owner: BTreeMap<usize, AgentId> = BTreeMap::new();
    let mut bundles: BTreeMap<AgentId, &VertexSet> = BTreeMap::new();

    for (agent, set) in alloc.packing.bundles() {
        if inst.agent(*agent).is_none() {
            notes.push(format!("bundle for unknown agent {agent}"));
        }
        if bundles.insert(*agent, set).is_some() {
            notes.push(format!("agent {agent} holds two bundles"));
        }
        for &v in set.iter() {
            if v >= graph.len() {
                notes.push(format!("agent {agent} holds out-of-range vertex index {v}"));
            } else if let Some(prev) = owner.insert(v, *agent) {
                notes.push(format!("vertex {} is held by agents {prev} and {agent}", graph.id(v)));
            }
        }
        if set.iter().all(|&v| v < graph.len()) && !is_connected_subset(graph, set) {
            notes.push(format!("bundle of agent {agent} is not connected"));
        }
    }

    let empty = VertexSet::new();
    let mut per_agent = Vec::with_capacity(inst.n());
    for a in &inst.agents {
        let bundle = match bundles.get(&a.id) {
            Some(s) => (*s).clone(),
            None => {
                notes.push(format!("agent {} is missing from the allocation", a.id));
                empty.clone()
            }
        };
        let mms = match records.iter().find(|r| r.agent == a.id) {
            Some(r) => r.value.clone(),
            None => {
                notes.push(format!("no share record for agent {}", a.id));
                S::zero()
            }
        };
        let value = a.value_of(bundle.iter().filter(|&&v| v < graph.len()));
        let ratio = share_ratio(&value, &mms);
        per_agent.push(AgentLine { agent: a.id, bundle, value, mms, ratio });
    }

    let min_ratio =
        per_agent.iter().map(|l| l.ratio.clone()).reduce(|a, b| if b < a { b } else { a }).unwrap_or_else(S::one);
    let structural_ok = notes.is_empty();
    for l in &per_agent {
        if l.ratio < *alpha {
            notes.push(format!("agent {} gets ratio {} below {}", l.agent, l.ratio, alpha));
        }
    }
    Certificate { alpha_target: alpha.clone(), per_agent, min_ratio, structural_ok, notes }
}

/// The smallest ratio `u_i(A_i) / mms_i` over all agents.
pub fn empirical_alpha<S: Scalar>(inst: &Instance<S>, alloc: &Allocation<S>, records: &[MmsRecord<S>]) -> S {
    check_allocation(inst, alloc, &S::zero(), records).min_ratio
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{GoodsGraph, Packing};
    use crate::oracle::{mms_records, OracleConfig};
    use crate::Value;

    fn q(n: i64, d: i64) -> Value {
        Value::new(n.into(), d.into())
    }

    fn path4_two_agents() -> (Instance<Value>, Vec<MmsRecord<Value>>) {
        let g = GoodsGraph::with_indexed_vertices(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let inst = Instance::from_utilities(g, vec![vec![q(1, 1); 4]; 2]).unwrap();
        let records = mms_records(&inst, &OracleConfig::default()).unwrap();
        (inst, records)
    }

    fn alloc(bundles: Vec<(AgentId, VertexSet)>) -> Allocation<Value> {
        Allocation { packing: Packing::new(bundles), target_alpha: q(0, 1), per_agent_ratio: BTreeMap::new() }
    }

    #[test]
    fn mms_allocation_passes_everywhere() {
        let (inst, records) = path4_two_agents();
        let a = alloc(vec![(1, [0, 1].into()), (2, [2, 3].into())]);
        let cert = check_allocation(&inst, &a, &q(1, 1), &records);
        assert!(cert.passes());
        assert_eq!(cert.min_ratio, q(1, 1));
        assert_eq!(empirical_alpha(&inst, &a, &records), q(1, 1));
    }

    #[test]
    fn overlap_fails_structurally() {
        let (inst, records) = path4_two_agents();
        let a = alloc(vec![(1, [0, 1, 2].into()), (2, [2, 3].into())]);
        let cert = check_allocation(&inst, &a, &q(0, 1), &records);
        assert!(!cert.structural_ok);
        assert!(!cert.passes());
    }

    #[test]
    fn disconnected_bundle_fails() {
        let (inst, records) = path4_two_agents();
        let a = alloc(vec![(1, [0, 2].into()), (2, [3].into())]);
        assert!(!check_allocation(&inst, &a, &q(0, 1), &records).structural_ok);
    }

    #[test]
    fn missing_agent_is_noted() {
        let (inst, records) = path4_two_agents();
        let a = alloc(vec![(1, [0, 1].into())]);
        let cert = check_allocation(&inst, &a, &q(0, 1), &records);
        assert!(!cert.structural_ok);
        assert_eq!(cert.per_agent[1].value, q(0, 1));
    }

    #[test]
    fn alpha_zero_accepts_any_valid_packing() {
        let (inst, records) = path4_two_agents();
        let a = alloc(vec![(1, VertexSet::new()), (2, [3].into())]);
        let cert = check_allocation(&inst, &a, &q(0, 1), &records);
        assert!(cert.passes());
        assert_eq!(cert.min_ratio, q(0, 1));
    }

    #[test]
    fn zero_share_counts_as_satisfied() {
        let g = GoodsGraph::with_indexed_vertices(2, &[(0, 1)]).unwrap();
        let inst = Instance::from_utilities(g, vec![vec![q(0, 1); 2], vec![q(1, 1); 2]]).unwrap();
        let records = mms_records(&inst, &OracleConfig::default()).unwrap();
        let a = alloc(vec![(1, VertexSet::new()), (2, [0, 1].into())]);
        let cert = check_allocation(&inst, &a, &q(1, 1), &records);
        assert_eq!(cert.per_agent[0].ratio, q(1, 1));
        assert!(cert.passes());
    }
}
