//! A quarter of the maximin share on complete multipartite graphs.
//!
//! The parts are split into a small side `V1` (the fewest smallest parts
//! holding at least `n` vertices) and the rest `V2`. Each bounded agent is
//! served from the side it values more by greedy carving with quarter
//! thresholds, then takes one spare vertex from the other side so that its
//! bundle becomes connected.

use std::collections::BTreeMap;

use crate::carve::{greedy_prefix_carve, CarveAgent};
use crate::error::{guarantee, Error, Result};
use crate::graphs::{multipartite_parts, recognize, GraphClass};
use crate::model::{AgentId, GoodsGraph, Instance, Vertex, VertexSet};
use crate::oracle::{mms_records, OracleConfig};
use crate::reduction::{reduce_with_records, Claimant, ConnectedSolver, Outcome};
use crate::scalar::Scalar;
use crate::trace::{MultipartiteStep, Step, Trace};

pub fn alpha<S: Scalar>() -> S {
    S::fraction(1, 4)
}

pub struct MultipartiteSolver;

impl<S: Scalar> ConnectedSolver<S> for MultipartiteSolver {
    fn alpha(&self) -> S {
        alpha()
    }

    fn solve(
        &mut self,
        graph: &GoodsGraph,
        region: &VertexSet,
        claimants: Vec<Claimant<S>>,
        trace: &mut Trace<S>,
    ) -> Result<Vec<(AgentId, VertexSet)>> {
        allocate_bounded_multipartite(graph, region, claimants, trace)
    }
}

pub fn allocate_multipartite<S: Scalar>(inst: &Instance<S>, config: &OracleConfig) -> Result<Outcome<S>> {
    let class = recognize(&inst.graph);
    if !class.has(GraphClass::CompleteMultipartite) || class.parts.as_ref().map_or(0, Vec::len) < 2 {
        return Err(Error::ClassMismatch { expected: "a complete multipartite graph with two or more parts" });
    }
    let records = mms_records(inst, config)?;
    reduce_with_records(inst, records, &mut MultipartiteSolver)
}

/// Serves quarter-bounded agents on a connected complete multipartite
/// region. The result partitions the region.
pub fn allocate_bounded_multipartite<S: Scalar>(
    graph: &GoodsGraph,
    region: &VertexSet,
    mut claimants: Vec<Claimant<S>>,
    trace: &mut Trace<S>,
) -> Result<Vec<(AgentId, VertexSet)>> {
    claimants.sort_by_key(|c| c.id);
    let n = claimants.len();
    match n {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![(claimants[0].id, region.clone())]),
        _ => {}
    }
    let mut parts = multipartite_parts(graph, region)
        .ok_or_else(|| Error::InternalGuarantee("region is not complete multipartite".into()))?;
    guarantee(parts.len() >= 2, || "region has a single part".into())?;
    guarantee(region.len() >= 5 * n, || format!("{} vertices for {n} bounded agents", region.len()))?;
    parts.sort_by_key(|p| (p.len(), p.first().copied()));

    let mut prefix = 0;
    let ell = parts
        .iter()
        .position(|p| {
            prefix += p.len();
            prefix >= n
        })
        .map(|i| i + 1)
        .expect("the region has at least n vertices");
    guarantee(ell < parts.len(), || "the small side uses every part".into())?;
    let v1: VertexSet = parts[..ell].iter().flatten().copied().collect();
    let v2: VertexSet = parts[ell..].iter().flatten().copied().collect();
    guarantee(v1.len() >= n && v2.len() >= n, || format!("sides of {} and {} vertices", v1.len(), v2.len()))?;

    let half_n = S::fraction(n, 2);
    let (first, second): (Vec<&Claimant<S>>, Vec<&Claimant<S>>) =
        claimants.iter().partition(|c| c.value(&v1) >= c.value(&v2));
    for (side, members) in [(&v1, &first), (&v2, &second)] {
        for c in members {
            guarantee(c.value(side) >= half_n.clone() * c.target.clone(), || {
                format!("agent {} values its side below n/2 targets", c.id)
            })?;
        }
    }

    let carve_side = |side: &VertexSet, members: &[&Claimant<S>]| {
        let order: Vec<Vertex> = side.iter().copied().collect();
        let pool: Vec<CarveAgent<'_, S>> = members
            .iter()
            .map(|c| CarveAgent { id: c.id, utility: &c.utility, threshold: c.target.clone() * alpha() })
            .collect();
        greedy_prefix_carve(&order, &pool, false)
    };
    let cut1 = carve_side(&v1, &first);
    let cut2 = carve_side(&v2, &second);
    guarantee(cut1.served.len() == first.len() && cut2.served.len() == second.len(), || {
        "greedy carving left an agent unserved".into()
    })?;

    let mut bundles: BTreeMap<AgentId, VertexSet> = BTreeMap::new();
    for (a, seg) in cut1.assignments.iter().chain(&cut2.assignments) {
        bundles.insert(*a, seg.iter().copied().collect());
    }
    let mut free1: Vec<Vertex> = cut1.leftover.clone();
    let mut free2: Vec<Vertex> = cut2.leftover.clone();
    guarantee(free2.len() >= first.len() && free1.len() >= second.len(), || {
        "not enough spare vertices on the opposite side".into()
    })?;
    let mut spares = Vec::with_capacity(n);
    for (assignments, free) in [(&cut1.assignments, &mut free2), (&cut2.assignments, &mut free1)] {
        for (a, _) in assignments {
            let v = free.remove(0);
            bundles.get_mut(a).expect("served agents hold a bundle").insert(v);
            spares.push((*a, v));
        }
    }

    let leftovers: VertexSet = free1.iter().chain(&free2).copied().collect();
    for &v in &leftovers {
        let owner = bundles
            .iter()
            .find(|(_, s)| graph.neighbors(v).iter().any(|w| s.contains(w)))
            .map(|(a, _)| *a)
            .ok_or_else(|| Error::InternalGuarantee(format!("leftover vertex {} touches no bundle", graph.id(v))))?;
        bundles.get_mut(&owner).expect("owner exists").insert(v);
    }

    trace.push(Step::Multipartite(MultipartiteStep {
        region: region.clone(),
        n,
        parts,
        ell,
        v1,
        v2,
        n1: first.iter().map(|c| c.id).collect(),
        n2: second.iter().map(|c| c.id).collect(),
        carved: cut1.assignments.iter().chain(&cut2.assignments).cloned().collect(),
        spares,
        leftovers,
    }));
    Ok(bundles.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::check_allocation;
    use crate::Value;

    fn q(n: i64, d: i64) -> Value {
        Value::new(n.into(), d.into())
    }

    fn complete_bipartite(a: usize, b: usize) -> GoodsGraph {
        let edges: Vec<(usize, usize)> = (0..a).flat_map(|i| (a..a + b).map(move |j| (i, j))).collect();
        GoodsGraph::with_indexed_vertices(a + b, &edges).unwrap()
    }

    fn check(inst: &Instance<Value>) -> Outcome<Value> {
        let out = allocate_multipartite(inst, &OracleConfig::default()).unwrap();
        let cert = check_allocation(inst, &out.allocation, &q(1, 4), &out.records);
        assert!(cert.passes(), "{cert:?}");
        out
    }

    #[test]
    fn k22_two_agents() {
        let inst = Instance::from_utilities(complete_bipartite(2, 2), vec![vec![q(1, 1); 4]; 2]).unwrap();
        let out = check(&inst);
        assert!(out.records.iter().all(|r| r.value == q(2, 1)));
    }

    #[test]
    fn lone_agent_takes_all() {
        let inst = Instance::from_utilities(complete_bipartite(2, 3), vec![vec![q(1, 1); 5]]).unwrap();
        let out = check(&inst);
        assert_eq!(out.allocation.packing.bundle(1).unwrap().len(), 5);
    }

    #[test]
    fn star_two_agents() {
        let inst = Instance::from_utilities(complete_bipartite(1, 5), vec![vec![q(1, 1); 6]; 2]).unwrap();
        check(&inst);
    }

    #[test]
    fn not_multipartite_is_rejected() {
        let g = GoodsGraph::with_indexed_vertices(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let inst = Instance::from_utilities(g, vec![vec![q(1, 1); 4]]).unwrap();
        assert!(matches!(allocate_multipartite(&inst, &OracleConfig::default()), Err(Error::ClassMismatch { .. })));
    }

    fn bounded(id: AgentId, utility: Vec<Value>, target: Value, witness: Vec<VertexSet>) -> Claimant<Value> {
        Claimant { id, utility, target, witness }
    }

    #[test]
    fn bounded_run_on_k55() {
        // Two uniform agents with target 5 on K_{5,5}: each side has 5 vertices.
        let g = complete_bipartite(5, 5);
        let w: Vec<VertexSet> = vec![[0, 1, 5, 6, 7].into(), [2, 3, 4, 8, 9].into()];
        let claimants =
            vec![bounded(1, vec![q(1, 1); 10], q(5, 1), w.clone()), bounded(2, vec![q(1, 1); 10], q(5, 1), w)];
        let mut trace = Trace::default();
        let grants = allocate_bounded_multipartite(&g, &g.all_vertices(), claimants, &mut trace).unwrap();
        let step = trace.multipartite().next().unwrap();
        assert_eq!(step.ell, 1);
        assert_eq!(step.n1, vec![1, 2]);
        assert!(step.n2.is_empty());
        assert_eq!(step.carved, vec![(1, vec![0, 1]), (2, vec![2, 3])]);
        assert_eq!(step.spares, vec![(1, 5), (2, 6)]);
        assert_eq!(grants[0].1, VertexSet::from([0, 1, 4, 5, 7, 8, 9]));
        assert_eq!(grants[1].1, VertexSet::from([2, 3, 6]));
    }
}
