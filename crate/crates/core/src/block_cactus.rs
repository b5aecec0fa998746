//! Half of the maximin share on connected graphs whose blocks are cycles or
//! cliques.
//!
//! Bounded agents are handled by induction on the block-cut tree. A
//! terminal block `B` with cut vertex `v` is either folded into `v` when
//! every agent values `B - v` below its target, or carved along a
//! Hamiltonian path ending at `v` with half-target thresholds.

use crate::carve::{greedy_prefix_carve, CarveAgent};
use crate::error::{guarantee, Error, Result};
use crate::graphs::{block_cut_tree_within, hamiltonian_path_in_block, recognize, GraphClass};
use crate::model::{AgentId, GoodsGraph, Instance, Vertex, VertexSet};
use crate::oracle::{max_min_ratio_in, mms_records, OracleConfig, RatioAgent};
use crate::reduction::{reduce_with_records, run_reduction, Claimant, ConnectedSolver, Outcome};
use crate::scalar::Scalar;
use crate::trace::{Claim, Step, Trace};

pub fn alpha<S: Scalar>() -> S {
    S::fraction(1, 2)
}

pub struct BlockCactusSolver {
    pub config: OracleConfig,
}

impl<S: Scalar> ConnectedSolver<S> for BlockCactusSolver {
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
        allocate_bounded(graph, region, claimants, &self.config, trace)
    }
}

pub fn allocate_block_cactus<S: Scalar>(inst: &Instance<S>, config: &OracleConfig) -> Result<Outcome<S>> {
    let class = recognize(&inst.graph);
    if !class.has(GraphClass::Connected) || !class.has(GraphClass::BlockCactus) {
        return Err(Error::ClassMismatch { expected: "a connected block-cactus graph" });
    }
    let records = mms_records(inst, config)?;
    reduce_with_records(inst, records, &mut BlockCactusSolver { config: *config })
}

fn claims<S: Scalar>(claimants: &[Claimant<S>]) -> Vec<Claim<S>> {
    claimants.iter().map(|c| Claim { agent: c.id, utility: c.utility.clone(), target: c.target.clone() }).collect()
}

/// The inductive step for half-bounded agents on a connected block-cactus
/// region. Every claimant gets at least half its target.
pub fn allocate_bounded<S: Scalar>(
    graph: &GoodsGraph,
    region: &VertexSet,
    claimants: Vec<Claimant<S>>,
    config: &OracleConfig,
    trace: &mut Trace<S>,
) -> Result<Vec<(AgentId, VertexSet)>> {
    match claimants.len() {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![(claimants[0].id, region.clone())]),
        _ => {}
    }
    let tree = block_cut_tree_within(graph, region)?;
    if tree.blocks.len() == 1 {
        let agents: Vec<RatioAgent<'_, S>> =
            claimants.iter().map(|c| RatioAgent { id: c.id, utility: &c.utility, target: c.target.clone() }).collect();
        let out = max_min_ratio_in(graph, region, &agents, config)?;
        guarantee(out.ratio >= alpha(), || format!("biconnected base case reached only {}", out.ratio))?;
        trace.push(Step::BlockBase {
            region: region.clone(),
            agents: claimants.iter().map(|c| c.id).collect(),
            ratio: out.ratio,
        });
        return Ok(out.grants);
    }
    let b = *tree
        .terminal_blocks
        .iter()
        .min_by_key(|&&b| tree.blocks[b].first().copied())
        .expect("a tree with two blocks has leaves");
    let block = tree.blocks[b].clone();
    let cut = tree.cuts_of(b)[0];
    let outer: VertexSet = block.iter().copied().filter(|&w| w != cut).collect();

    if claimants.iter().all(|c| c.value(&outer) < c.target) {
        contract(graph, region, claimants, block, cut, outer, config, trace)
    } else {
        carve(graph, region, claimants, block, cut, outer, config, trace)
    }
}

#[allow(clippy::too_many_arguments)]
fn contract<S: Scalar>(
    graph: &GoodsGraph,
    region: &VertexSet,
    claimants: Vec<Claimant<S>>,
    block: VertexSet,
    cut: Vertex,
    outer: VertexSet,
    config: &OracleConfig,
    trace: &mut Trace<S>,
) -> Result<Vec<(AgentId, VertexSet)>> {
    let after: VertexSet = region.difference(&outer).copied().collect();
    let mut folded = Vec::with_capacity(claimants.len());
    for mut c in claimants {
        c.utility[cut] = c.value(&block);
        for p in &mut c.witness {
            if !p.is_disjoint(&outer) {
                // No bundle fits inside the outer part, so it reaches out through the cut vertex.
                guarantee(p.contains(&cut), || format!("witness bundle of agent {} is stuck in a leaf block", c.id))?;
                p.retain(|w| !outer.contains(w));
            }
        }
        folded.push(c);
    }
    trace.push(Step::BlockContract { block, cut, region_after: after.clone(), claims: claims(&folded) });
    let mut solver = BlockCactusSolver { config: *config };
    let mut grants = run_reduction(graph, &after, folded, &mut solver, trace)?;
    if let Some((_, bundle)) = grants.iter_mut().find(|(_, s)| s.contains(&cut)) {
        bundle.extend(outer);
    }
    Ok(grants)
}

#[allow(clippy::too_many_arguments)]
fn carve<S: Scalar>(
    graph: &GoodsGraph,
    region: &VertexSet,
    claimants: Vec<Claimant<S>>,
    block: VertexSet,
    cut: Vertex,
    outer: VertexSet,
    config: &OracleConfig,
    trace: &mut Trace<S>,
) -> Result<Vec<(AgentId, VertexSet)>> {
    let path = hamiltonian_path_in_block(graph, &block, cut)?;
    let pool: Vec<CarveAgent<'_, S>> = claimants
        .iter()
        .map(|c| CarveAgent { id: c.id, utility: &c.utility, threshold: c.target.clone() * alpha() })
        .collect();
    let cut_result = greedy_prefix_carve(&path, &pool, true);
    guarantee(!cut_result.assignments.is_empty(), || "carving served nobody".into())?;
    let ell = cut_result.assignments.len();
    let taken: VertexSet = cut_result.assignments.iter().flat_map(|(_, seg)| seg.iter().copied()).collect();
    let rest_of_path: VertexSet = cut_result.leftover.iter().copied().filter(|&w| w != cut).collect();
    let after: VertexSet = region.difference(&taken).copied().collect();

    let mut remaining = Vec::new();
    for mut c in claimants.into_iter().filter(|c| !cut_result.served.contains(&c.id)) {
        let hit: Vec<usize> = (0..c.witness.len()).filter(|&j| !c.witness[j].is_disjoint(&taken)).collect();
        if hit.len() <= ell {
            c.witness.retain(|p| p.is_disjoint(&taken));
        } else {
            // One witness bundle crosses the cut vertex; the unused rest of
            // the path is worth more to this agent than that bundle's part
            // inside the leaf block.
            let through = hit.iter().copied().find(|&j| c.witness[j].contains(&cut));
            let through = through.ok_or_else(|| {
                Error::InternalGuarantee(format!("agent {}: {} witness bundles meet the carved set", c.id, hit.len()))
            })?;
            let mut merged: VertexSet = c.witness[through].difference(&outer).copied().collect();
            merged.extend(rest_of_path.iter().copied());
            guarantee(c.value(&merged) >= c.target, || format!("agent {}: rerouted bundle too light", c.id))?;
            let mut witness: Vec<VertexSet> =
                c.witness.iter().filter(|p| p.is_disjoint(&outer) && !p.contains(&cut)).cloned().collect();
            witness.push(merged);
            c.witness = witness;
        }
        remaining.push(c);
    }
    for c in &remaining {
        guarantee(c.witness.len() >= remaining.len(), || {
            format!("agent {} keeps {} witness bundles for {} agents", c.id, c.witness.len(), remaining.len())
        })?;
    }
    trace.push(Step::BlockCarve {
        block,
        cut,
        path,
        carved: cut_result.assignments.clone(),
        region_after: after.clone(),
        remaining: claims(&remaining),
    });
    let mut grants: Vec<(AgentId, VertexSet)> =
        cut_result.assignments.into_iter().map(|(a, seg)| (a, seg.into_iter().collect())).collect();
    grants.extend(allocate_bounded(graph, &after, remaining, config, trace)?);
    Ok(grants)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::check_allocation;
    use crate::Value;

    fn q(n: i64, d: i64) -> Value {
        Value::new(n.into(), d.into())
    }

    fn check(inst: &Instance<Value>) -> Outcome<Value> {
        let out = allocate_block_cactus(inst, &OracleConfig::default()).unwrap();
        let cert = check_allocation(inst, &out.allocation, &q(1, 2), &out.records);
        assert!(cert.passes(), "{cert:?}");
        out
    }

    #[test]
    fn triangle_with_pendant() {
        let g = GoodsGraph::new(["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("a", "c"), ("c", "d")]).unwrap();
        let inst = Instance::from_utilities(g, vec![vec![q(1, 1); 4]; 2]).unwrap();
        let out = check(&inst);
        assert!(out.records.iter().all(|r| r.value == q(2, 1)));
        for (_, set) in out.allocation.packing.bundles() {
            assert!(!set.is_empty());
        }
    }

    #[test]
    fn single_agent_gets_everything() {
        let g = GoodsGraph::with_indexed_vertices(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let inst = Instance::from_utilities(g, vec![vec![q(1, 1); 4]]).unwrap();
        let out = check(&inst);
        assert_eq!(out.allocation.min_ratio(), q(1, 1));
    }

    #[test]
    fn five_cycle() {
        let g = GoodsGraph::with_indexed_vertices(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let inst = Instance::from_utilities(g, vec![vec![q(1, 1); 5]; 2]).unwrap();
        let out = check(&inst);
        assert!(out.records.iter().all(|r| r.value == q(2, 1)));
    }

    #[test]
    fn k6_delegates_to_the_base_case() {
        let e: Vec<(usize, usize)> = (0..6).flat_map(|a| (a + 1..6).map(move |b| (a, b))).collect();
        let g = GoodsGraph::with_indexed_vertices(6, &e).unwrap();
        let inst = Instance::from_utilities(g, vec![vec![q(1, 1); 6]; 2]).unwrap();
        let out = check(&inst);
        assert!(out.allocation.min_ratio() >= q(1, 1));
        assert!(out.trace.steps.iter().any(|s| matches!(s, Step::BlockBase { .. })));
    }

    #[test]
    fn zero_valued_leaf_is_contracted() {
        let g = GoodsGraph::new(["a", "b", "c"], [("a", "b"), ("b", "c")]).unwrap();
        let b = g.vertex("b").unwrap();
        let u = vec![q(0, 1), q(1, 1), q(1, 1)];
        let claimants: Vec<Claimant<Value>> = (1..=2)
            .map(|id| Claimant {
                id,
                utility: u.clone(),
                target: q(1, 1),
                witness: vec![VertexSet::from([0, 1]), VertexSet::from([2])],
            })
            .collect();
        let mut trace = Trace::default();
        // Targets of one with unit vertices are not half-bounded, which is
        // fine here: only the first step is inspected.
        let _ = allocate_bounded(&g, &g.all_vertices(), claimants, &OracleConfig::default(), &mut trace);
        match &trace.steps[0] {
            Step::BlockContract { cut, region_after, .. } => {
                assert_eq!(*cut, b);
                assert_eq!(*region_after, VertexSet::from([1, 2]));
            }
            other => panic!("expected a contraction, got {other:?}"),
        }
    }

    #[test]
    fn heavy_leaf_block_is_carved() {
        // Clique {a,b,c,d} hanging off d, which continues into the path d-e-...-i.
        let mut edges = vec![("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")];
        edges.extend([("d", "e"), ("e", "f"), ("f", "g"), ("g", "h"), ("h", "i")]);
        let g = GoodsGraph::new(["a", "b", "c", "d", "e", "f", "g", "h", "i"], edges).unwrap();
        let mut u1 = vec![q(1, 1); 9];
        u1[..3].fill(q(2, 1));
        let claimants = vec![
            Claimant {
                id: 1,
                utility: u1,
                target: q(6, 1),
                witness: vec![[0, 1, 2].into(), [3, 4, 5, 6, 7, 8].into()],
            },
            Claimant {
                id: 2,
                utility: vec![q(1, 1); 9],
                target: q(4, 1),
                witness: vec![[0, 1, 2, 3].into(), [4, 5, 6, 7].into()],
            },
        ];
        let mut trace = Trace::default();
        let grants = allocate_bounded(&g, &g.all_vertices(), claimants, &OracleConfig::default(), &mut trace).unwrap();
        match &trace.steps[0] {
            Step::BlockCarve { carved, path, remaining, .. } => {
                assert_eq!(path, &vec![0, 1, 2, 3]);
                assert_eq!(carved, &vec![(1, vec![0, 1])]);
                assert_eq!(remaining.len(), 1);
            }
            other => panic!("expected carving, got {other:?}"),
        }
        assert_eq!(grants[0], (1, VertexSet::from([0, 1])));
        assert_eq!(grants[1], (2, (2..9).collect()));
    }
}
