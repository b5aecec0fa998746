//! Reduction from arbitrary agents to bounded ones: heavy vertices are
//! handed out first, then the remaining graph is split into components and
//! each component is solved for the agents whose witness bundles it holds.
//!
//! Every agent carries a target and a witness packing: at least as many
//! disjoint connected bundles, each worth the target, as there are agents in
//! the current call. The witness is updated alongside every graph change, so
//! shares never have to be recomputed below the top level.

use std::collections::BTreeMap;

use crate::error::{guarantee, Error, Result};
use crate::graphs::components_within;
use crate::model::{AgentId, Allocation, GoodsGraph, Instance, Vertex, VertexSet};
use crate::oracle::{pmms_records, MmsRecord, OracleConfig};
use crate::scalar::{total, Scalar};
use crate::trace::{ReductionStep, Step, Trace};

#[derive(Debug, Clone, PartialEq)]
pub struct Claimant<S> {
    pub id: AgentId,
    /// One value per graph vertex; only the current region matters.
    pub utility: Vec<S>,
    pub target: S,
    /// Disjoint connected bundles inside the region, each worth `target`.
    pub witness: Vec<VertexSet>,
}

impl<S: Scalar> Claimant<S> {
    pub fn value(&self, set: &VertexSet) -> S {
        total(&self.utility, set)
    }
}

/// A solver for connected regions whose agents are all bounded: every
/// vertex is worth less than `alpha * target`.
pub trait ConnectedSolver<S: Scalar> {
    fn alpha(&self) -> S;

    fn solve(
        &mut self,
        graph: &GoodsGraph,
        region: &VertexSet,
        claimants: Vec<Claimant<S>>,
        trace: &mut Trace<S>,
    ) -> Result<Vec<(AgentId, VertexSet)>>;
}

/// Adapts a closure into a [`ConnectedSolver`].
pub struct FnSolver<S, F> {
    pub alpha: S,
    pub solve: F,
}

impl<S, F> ConnectedSolver<S> for FnSolver<S, F>
where
    S: Scalar,
    F: FnMut(&GoodsGraph, &VertexSet, &[Claimant<S>]) -> Result<Vec<(AgentId, VertexSet)>>,
{
    fn alpha(&self) -> S {
        self.alpha.clone()
    }

    fn solve(
        &mut self,
        graph: &GoodsGraph,
        region: &VertexSet,
        claimants: Vec<Claimant<S>>,
        _trace: &mut Trace<S>,
    ) -> Result<Vec<(AgentId, VertexSet)>> {
        (self.solve)(graph, region, &claimants)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReductionState {
    pub peeled: Vec<(Vertex, AgentId)>,
    pub residual_agents: Vec<AgentId>,
    pub components: Vec<VertexSet>,
    pub f: BTreeMap<(AgentId, usize), usize>,
}

impl ReductionState {
    /// Fills `f` from each residual agent's witness bundles.
    pub fn count_witness_bundles(&mut self, witnesses: &BTreeMap<AgentId, Vec<VertexSet>>) {
        self.f.clear();
        for &a in &self.residual_agents {
            let Some(bundles) = witnesses.get(&a) else { continue };
            for (j, c) in self.components.iter().enumerate() {
                let inside = bundles.iter().filter(|b| !b.is_empty() && b.is_subset(c)).count();
                self.f.insert((a, j), inside);
            }
        }
    }
}

/// Hands out heavy vertices: while some agent without a vertex values a
/// free vertex at `alpha * share` or more, the smallest such agent takes
/// its most valuable one (smallest id on ties). Agents with a zero share
/// are skipped.
fn peel<S: Scalar>(region: &VertexSet, claimants: &[&Claimant<S>], alpha: &S) -> Vec<(Vertex, AgentId)> {
    let mut order: Vec<&Claimant<S>> = claimants.to_vec();
    order.sort_by_key(|c| c.id);
    let mut free = region.clone();
    let mut peeled = Vec::new();
    let mut done = vec![false; order.len()];
    loop {
        let pick = order.iter().enumerate().filter(|(j, _)| !done[*j]).find_map(|(j, c)| {
            let bar = alpha.clone() * c.target.clone();
            let mut best: Option<Vertex> = None;
            for &v in &free {
                if c.utility[v] >= bar && best.is_none_or(|b| c.utility[v] > c.utility[b]) {
                    best = Some(v);
                }
            }
            best.map(|v| (j, v))
        });
        let Some((j, v)) = pick else { break };
        done[j] = true;
        free.remove(&v);
        peeled.push((v, order[j].id));
    }
    peeled
}

/// Heavy-vertex peeling on a whole instance with the given shares. The
/// witness counts `f` are left empty.
pub fn peel_heavy_vertices<S: Scalar>(inst: &Instance<S>, alpha: &S, shares: &BTreeMap<AgentId, S>) -> ReductionState {
    let claimants: Vec<Claimant<S>> = inst
        .agents
        .iter()
        .map(|a| Claimant {
            id: a.id,
            utility: a.utility.clone(),
            target: shares.get(&a.id).cloned().unwrap_or_else(S::zero),
            witness: Vec::new(),
        })
        .collect();
    let positive: Vec<&Claimant<S>> = claimants.iter().filter(|c| c.target > S::zero()).collect();
    let region = inst.graph.all_vertices();
    let peeled = peel(&region, &positive, alpha);
    let mut rest = region;
    for (v, _) in &peeled {
        rest.remove(v);
    }
    ReductionState {
        residual_agents: positive.iter().map(|c| c.id).filter(|id| peeled.iter().all(|(_, a)| a != id)).collect(),
        components: components_within(&inst.graph, &rest),
        peeled,
        f: BTreeMap::new(),
    }
}

/// Largest `p` with `sorted_f[p-1] >= p`, for a nonincreasing list.
pub fn compute_kj(sorted_f: &[usize]) -> usize {
    sorted_f.iter().enumerate().filter(|&(i, &f)| f > i).map(|(i, _)| i + 1).next_back().unwrap_or(0)
}

/// The reduction on one region. Returns the bundles granted to every
/// claimant; each is worth at least `alpha * target` to its owner.
pub fn run_reduction<S: Scalar, C: ConnectedSolver<S>>(
    graph: &GoodsGraph,
    region: &VertexSet,
    claimants: Vec<Claimant<S>>,
    solver: &mut C,
    trace: &mut Trace<S>,
) -> Result<Vec<(AgentId, VertexSet)>> {
    let alpha = solver.alpha();
    let (active, idle): (Vec<Claimant<S>>, Vec<Claimant<S>>) =
        claimants.into_iter().partition(|c| c.target > S::zero());
    let mut grants: Vec<(AgentId, VertexSet)> = idle.iter().map(|c| (c.id, VertexSet::new())).collect();

    let refs: Vec<&Claimant<S>> = active.iter().collect();
    let peeled = peel(region, &refs, &alpha);
    let mut rest = region.clone();
    for &(v, a) in &peeled {
        rest.remove(&v);
        grants.push((a, VertexSet::from([v])));
    }
    let components = components_within(graph, &rest);
    let mut residual: Vec<Claimant<S>> = active
        .into_iter()
        .filter(|c| peeled.iter().all(|(_, a)| *a != c.id))
        .map(|mut c| {
            c.witness.retain(|b| !b.is_empty() && b.is_subset(&rest));
            c
        })
        .collect();
    let n_residual = residual.len();

    let mut f: BTreeMap<(AgentId, usize), usize> = BTreeMap::new();
    for c in &residual {
        guarantee(c.witness.len() >= n_residual, || {
            format!("agent {} kept {} witness bundles for {n_residual} agents", c.id, c.witness.len())
        })?;
        for (j, comp) in components.iter().enumerate() {
            f.insert((c.id, j), c.witness.iter().filter(|b| b.is_subset(comp)).count());
        }
    }

    let mut served = Vec::new();
    for (j, comp) in components.iter().enumerate() {
        if residual.is_empty() {
            break;
        }
        residual.sort_by_key(|c| (std::cmp::Reverse(f[&(c.id, j)]), c.id));
        let counts: Vec<usize> = residual.iter().map(|c| f[&(c.id, j)]).collect();
        let k = compute_kj(&counts);
        if k == 0 {
            continue;
        }
        let rest_agents = residual.split_off(k);
        let chosen: Vec<Claimant<S>> = std::mem::replace(&mut residual, rest_agents)
            .into_iter()
            .map(|mut c| {
                c.witness.retain(|b| b.is_subset(comp));
                c
            })
            .collect();
        let bars: Vec<(AgentId, Vec<S>, S)> =
            chosen.iter().map(|c| (c.id, c.utility.clone(), alpha.clone() * c.target.clone())).collect();
        let ids: Vec<AgentId> = chosen.iter().map(|c| c.id).collect();
        let sub = solver.solve(graph, comp, chosen, trace)?;
        for (id, utility, bar) in bars {
            let bundle = sub.iter().find(|(a, _)| *a == id).map(|(_, s)| s);
            let value = bundle.map_or_else(S::zero, |s| total(&utility, s));
            guarantee(value >= bar, || format!("agent {id} received less than alpha times its target"))?;
            guarantee(bundle.is_some_and(|s| s.is_subset(comp)), || {
                format!("bundle of agent {id} leaves its component")
            })?;
        }
        grants.extend(sub);
        served.push((j, k, ids));
    }
    guarantee(residual.is_empty(), || format!("{} agents left unserved", residual.len()))?;

    trace.push(Step::Reduction(ReductionStep {
        region: region.clone(),
        zero_target: idle.iter().map(|c| c.id).collect(),
        peeled,
        components,
        f,
        served,
        residual: n_residual,
    }));
    grants.sort_by_key(|(a, _)| *a);
    Ok(grants)
}

/// Result of a full allocator run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome<S> {
    pub allocation: Allocation<S>,
    /// The shares the allocation was built against, one per agent.
    pub records: Vec<MmsRecord<S>>,
    pub trace: Trace<S>,
}

impl<S: Scalar> Outcome<S> {
    pub fn shares(&self) -> BTreeMap<AgentId, S> {
        self.records.iter().map(|r| (r.agent, r.value.clone())).collect()
    }
}

/// Claimants for the whole graph from oracle records.
pub fn claimants_from_records<S: Scalar>(inst: &Instance<S>, records: &[MmsRecord<S>]) -> Vec<Claimant<S>> {
    inst.agents
        .iter()
        .map(|a| {
            let r = records.iter().find(|r| r.agent == a.id).expect("one record per agent");
            Claimant {
                id: a.id,
                utility: a.utility.clone(),
                target: r.value.clone(),
                witness: r.bundles().into_iter().filter(|b| !b.is_empty()).collect(),
            }
        })
        .collect()
}

/// Runs the reduction on the whole graph against precomputed shares.
pub fn reduce_with_records<S: Scalar, C: ConnectedSolver<S>>(
    inst: &Instance<S>,
    records: Vec<MmsRecord<S>>,
    solver: &mut C,
) -> Result<Outcome<S>> {
    if records.len() != inst.n() {
        return Err(Error::InvalidInput("need one share record per agent".into()));
    }
    let mut trace = Trace::default();
    let claimants = claimants_from_records(inst, &records);
    let grants = run_reduction(&inst.graph, &inst.graph.all_vertices(), claimants, solver, &mut trace)?;
    let shares = records.iter().map(|r| (r.agent, r.value.clone())).collect();
    let allocation = Allocation::from_grants(inst, grants, solver.alpha(), &shares);
    Ok(Outcome { allocation, records, trace })
}

/// Allocation giving every agent `alpha` times its packing maximin share,
/// provided `solver` meets its contract on every connected induced subgraph.
pub fn allocate_reduction<S: Scalar, C: ConnectedSolver<S>>(
    inst: &Instance<S>,
    solver: &mut C,
    config: &OracleConfig,
) -> Result<Outcome<S>> {
    let records = pmms_records(inst, config)?;
    reduce_with_records(inst, records, solver)
}
