//! Allocation on connected split graphs with few agent types.
//!
//! Per type an n-partition of the region is taken. Pairs of packing
//! sequences are merged until every independent vertex sits in exactly one
//! packing, then each independent vertex is folded into a clique neighbour
//! of its bundle. The clique instance is solved exactly and the folded
//! vertices are unpacked again.

use std::collections::{BTreeMap, BTreeSet};

use crate::carve::complete_to_partition;
use crate::error::{guarantee, Error, Result};
use crate::graphs::{recognize, split_pair, GraphClass};
use crate::model::{AgentId, GoodsGraph, Instance, Vertex, VertexSet};
use crate::oracle::{max_min_ratio_in, mms_in, mms_records, OracleConfig, RatioAgent};
use crate::reduction::{reduce_with_records, Claimant, ConnectedSolver, Outcome};
use crate::scalar::{total, Scalar};
use crate::trace::{KernelStep, KernelType, MergeStep, MergedBundle, Step, Trace};

/// Smallest `k` with `p <= 2^k`.
pub fn level_for_types(p: usize) -> usize {
    p.max(1).next_power_of_two().trailing_zeros() as usize
}

/// `3 / (7 * 2^k - 3)`.
pub fn alpha<S: Scalar>(k: usize) -> S {
    S::fraction(3, 7 * (1usize << k) - 3)
}

/// `beta(k, 0) = 1` and `beta(k, l + 1) = (beta(k, l) - alpha(k)) / 2`.
pub fn beta<S: Scalar>(k: usize, ell: usize) -> S {
    assert!(ell <= k, "level {ell} above {k}");
    let a = alpha::<S>(k);
    let two = S::from_count(2);
    (0..ell).fold(S::one(), |b, _| (b - a.clone()) / two.clone())
}

/// A group of agents with equal utility and equal target.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentType<S> {
    pub utility: Vec<S>,
    pub target: S,
}

/// `2^level` packings, one per type; bundle `j` of packing `i` is worth at
/// least `beta(k, level)` times the target of type `i`, and each
/// independent vertex lies in a bundle of exactly one packing.
#[derive(Debug, Clone, PartialEq)]
pub struct PackingSequence<S> {
    pub packings: Vec<Vec<VertexSet>>,
    pub k: usize,
    pub level: usize,
    pub beta: S,
}

fn best_unassigned<S: Scalar>(
    bundle: &VertexSet,
    independent: &VertexSet,
    assigned: &BTreeSet<Vertex>,
    utility: &[S],
) -> Option<Vertex> {
    bundle.iter().copied().filter(|v| independent.contains(v) && !assigned.contains(v)).fold(
        None,
        |best: Option<Vertex>, v| match best {
            Some(b) if utility[b] >= utility[v] => Some(b),
            _ => Some(v),
        },
    )
}

/// Resolves every independent vertex shared by a bundle of `left` and one
/// of `right`. A bundle is picked, its most valuable unassigned independent
/// vertex is assigned to it and removed from its twin, and the twin is
/// picked next if it still has one; otherwise the scan restarts from the
/// first bundle of the first packing. Ties go to the smallest vertex.
pub fn merge_packings<S: Scalar>(
    left: PackingSequence<S>,
    right: PackingSequence<S>,
    utilities: &[&[S]],
    independent: &VertexSet,
) -> Result<PackingSequence<S>> {
    if left.k != right.k || left.level != right.level {
        return Err(Error::InvalidInput("merged sequences must sit on the same level".into()));
    }
    let mut packings = left.packings;
    packings.extend(right.packings);
    if utilities.len() != packings.len() {
        return Err(Error::InvalidInput(format!("{} utilities for {} packings", utilities.len(), packings.len())));
    }
    let mut places: BTreeMap<Vertex, Vec<(usize, usize)>> = BTreeMap::new();
    for (p, packing) in packings.iter().enumerate() {
        for (b, bundle) in packing.iter().enumerate() {
            for &v in bundle.intersection(independent) {
                places.entry(v).or_default().push((p, b));
            }
        }
    }
    for &v in independent {
        let at = places.get(&v).map_or(&[][..], Vec::as_slice);
        if at.len() != 2 || at[0].0 == at[1].0 {
            return Err(Error::Structural(format!(
                "independent vertex {v} lies in {} bundles instead of two packings",
                at.len()
            )));
        }
    }

    let mut assigned = BTreeSet::new();
    let mut next: Option<(usize, usize)> = None;
    loop {
        let has_open = |(p, b): (usize, usize), assigned: &BTreeSet<Vertex>| {
            best_unassigned(&packings[p][b], independent, assigned, utilities[p]).is_some()
        };
        let pick = next.filter(|&at| has_open(at, &assigned)).or_else(|| {
            (0..packings.len())
                .flat_map(|p| (0..packings[p].len()).map(move |b| (p, b)))
                .find(|&at| has_open(at, &assigned))
        });
        let Some((p, b)) = pick else { break };
        let v = best_unassigned(&packings[p][b], independent, &assigned, utilities[p]).expect("picked bundle is open");
        assigned.insert(v);
        let twin = places[&v].iter().copied().find(|&at| at != (p, b)).expect("two places");
        packings[twin.0][twin.1].remove(&v);
        next = Some(twin);
    }
    let level = left.level + 1;
    Ok(PackingSequence { packings, k: left.k, level, beta: beta(left.k, level) })
}

/// Builds the sequence for `types` (a power-of-two count at most `2^k`)
/// from one n-partition per type, merging halves recursively. Every bundle
/// is checked against its level's bound.
pub fn build_packing_sequence<S: Scalar>(
    independent: &VertexSet,
    types: &[AgentType<S>],
    partitions: &[Vec<VertexSet>],
    k: usize,
    trace: &mut Trace<S>,
) -> Result<PackingSequence<S>> {
    if !types.len().is_power_of_two() || types.len() > 1 << k || partitions.len() != types.len() {
        return Err(Error::InvalidInput(format!(
            "{} types and {} partitions at k = {k}",
            types.len(),
            partitions.len()
        )));
    }
    build_range(independent, types, partitions, k, 0..types.len(), trace)
}

fn build_range<S: Scalar>(
    independent: &VertexSet,
    types: &[AgentType<S>],
    partitions: &[Vec<VertexSet>],
    k: usize,
    range: std::ops::Range<usize>,
    trace: &mut Trace<S>,
) -> Result<PackingSequence<S>> {
    if range.len() == 1 {
        let t = &types[range.start];
        for bundle in &partitions[range.start] {
            guarantee(total(&t.utility, bundle) >= t.target, || {
                format!("partition of type {} has a bundle below the target", range.start)
            })?;
        }
        return Ok(PackingSequence { packings: vec![partitions[range.start].clone()], k, level: 0, beta: S::one() });
    }
    let mid = range.start + range.len() / 2;
    let left = build_range(independent, types, partitions, k, range.start..mid, trace)?;
    let right = build_range(independent, types, partitions, k, mid..range.end, trace)?;
    let before: Vec<Vec<VertexSet>> = left.packings.iter().chain(&right.packings).cloned().collect();
    let utilities: Vec<&[S]> = types[range.clone()].iter().map(|t| &t.utility[..]).collect();
    let merged = merge_packings(left, right, &utilities, independent)?;

    let mut bundles = Vec::new();
    for (p, (old, new)) in before.iter().zip(&merged.packings).enumerate() {
        let t = &types[range.start + p];
        let bar = merged.beta.clone() * t.target.clone();
        for (q, p_new) in old.iter().zip(new) {
            guarantee(total(&t.utility, p_new) >= bar, || {
                format!("merged bundle of type {} fell below beta at level {}", range.start + p, merged.level)
            })?;
            bundles.push(MergedBundle { packing: p, before: q.clone(), after: p_new.clone() });
        }
    }
    trace.push(Step::Merge(MergeStep { types: range, level: merged.level, beta: merged.beta.clone(), bundles }));
    Ok(merged)
}

/// The clique side with every independent vertex folded into a neighbour
/// from its own bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelInstance<S> {
    pub kernel: VertexSet,
    /// `v -> n_v` for every independent vertex held by some packing.
    pub anchors: BTreeMap<Vertex, Vertex>,
    /// `w -> N_w`, the independent vertices anchored at `w`.
    pub attached: BTreeMap<Vertex, VertexSet>,
    /// Per type: its utility plus, on each clique vertex, the independent
    /// vertices of its own packing anchored there.
    pub folded: Vec<Vec<S>>,
}

impl<S: Scalar> KernelInstance<S> {
    /// `A' ∪ N_w` over all `w` in `A'`.
    pub fn expand(&self, bundle: &VertexSet) -> VertexSet {
        let mut out = bundle.clone();
        for w in bundle {
            if let Some(n) = self.attached.get(w) {
                out.extend(n.iter().copied());
            }
        }
        out
    }
}

pub fn contract_to_kernel<S: Scalar>(
    graph: &GoodsGraph,
    kernel: &VertexSet,
    independent: &VertexSet,
    seq: &PackingSequence<S>,
    types: &[AgentType<S>],
) -> Result<KernelInstance<S>> {
    if types.len() != seq.packings.len() {
        return Err(Error::InvalidInput("one type per packing".into()));
    }
    let mut anchors = BTreeMap::new();
    let mut attached: BTreeMap<Vertex, VertexSet> = BTreeMap::new();
    let mut folded: Vec<Vec<S>> = types.iter().map(|t| t.utility.clone()).collect();
    for (p, packing) in seq.packings.iter().enumerate() {
        for bundle in packing {
            for &v in bundle.intersection(independent) {
                let anchor =
                    graph.neighbors(v).iter().copied().find(|w| kernel.contains(w) && bundle.contains(w)).ok_or_else(
                        || {
                            Error::InternalGuarantee(format!(
                                "independent vertex {} has no clique vertex in its bundle",
                                graph.id(v)
                            ))
                        },
                    )?;
                anchors.insert(v, anchor);
                attached.entry(anchor).or_default().insert(v);
                folded[p][anchor] = folded[p][anchor].clone() + types[p].utility[v].clone();
            }
        }
    }
    Ok(KernelInstance { kernel: kernel.clone(), anchors, attached, folded })
}

/// The bounded pipeline for one connected split region. `k` is fixed by the
/// number of types in the whole instance.
#[derive(Debug, Clone, Copy)]
pub struct SplitSolver {
    pub k: usize,
    pub config: OracleConfig,
}

impl<S: Scalar> ConnectedSolver<S> for SplitSolver {
    fn alpha(&self) -> S {
        alpha(self.k)
    }

    fn solve(
        &mut self,
        graph: &GoodsGraph,
        region: &VertexSet,
        claimants: Vec<Claimant<S>>,
        trace: &mut Trace<S>,
    ) -> Result<Vec<(AgentId, VertexSet)>> {
        allocate_bounded_split(graph, region, claimants, self.k, &self.config, trace)
    }
}

pub fn allocate_split<S: Scalar>(inst: &Instance<S>, config: &OracleConfig) -> Result<Outcome<S>> {
    let class = recognize(&inst.graph);
    if !class.has(GraphClass::Connected) || !class.has(GraphClass::Split) {
        return Err(Error::ClassMismatch { expected: "a connected split graph" });
    }
    let k = level_for_types(inst.type_count());
    let records = mms_records(inst, config)?;
    reduce_with_records(inst, records, &mut SplitSolver { k, config: *config })
}

pub fn allocate_bounded_split<S: Scalar>(
    graph: &GoodsGraph,
    region: &VertexSet,
    mut claimants: Vec<Claimant<S>>,
    k: usize,
    config: &OracleConfig,
    trace: &mut Trace<S>,
) -> Result<Vec<(AgentId, VertexSet)>> {
    claimants.sort_by_key(|c| c.id);
    let n = claimants.len();
    match n {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![(claimants[0].id, region.clone())]),
        _ => {}
    }
    let (kernel, independent) =
        split_pair(graph, region).ok_or_else(|| Error::InternalGuarantee("region is not split".into()))?;

    let mut types: Vec<AgentType<S>> = Vec::new();
    let mut partitions: Vec<Vec<VertexSet>> = Vec::new();
    let mut type_of = Vec::with_capacity(n);
    for c in &claimants {
        let pos = types.iter().position(|t| t.utility == c.utility && t.target == c.target);
        let pos = match pos {
            Some(p) => p,
            None => {
                guarantee(c.witness.len() >= n, || format!("agent {} has too few witness bundles", c.id))?;
                let mut parts: Vec<((), VertexSet)> = c.witness[..n].iter().map(|b| ((), b.clone())).collect();
                complete_to_partition(graph, region, &mut parts)?;
                types.push(AgentType { utility: c.utility.clone(), target: c.target.clone() });
                partitions.push(parts.into_iter().map(|(_, b)| b).collect());
                types.len() - 1
            }
        };
        type_of.push(pos);
    }
    guarantee(types.len() <= 1 << k, || format!("{} types exceed 2^{k}", types.len()))?;
    while types.len() < 1 << k {
        types.push(types.last().expect("at least one type").clone());
        partitions.push(partitions.last().expect("at least one partition").clone());
    }

    let seq = build_packing_sequence(&independent, &types, &partitions, k, trace)?;
    let kern = contract_to_kernel(graph, &kernel, &independent, &seq, &types)?;

    let mut kernel_mms = Vec::with_capacity(types.len());
    for (p, t) in types.iter().enumerate() {
        let (value, _) = mms_in(graph, &kernel, &kern.folded[p], n, config)?;
        guarantee(value >= seq.beta.clone() * t.target.clone(), || {
            format!("kernel share of type {p} is below beta times its target")
        })?;
        kernel_mms.push(value);
    }
    let agents: Vec<RatioAgent<'_, S>> = claimants
        .iter()
        .zip(&type_of)
        .map(|(c, &p)| RatioAgent { id: c.id, utility: &kern.folded[p], target: kernel_mms[p].clone() })
        .collect();
    let out = max_min_ratio_in(graph, &kernel, &agents, config)?;
    guarantee(out.ratio >= S::fraction(3, 4), || format!("kernel allocation reached only {}", out.ratio))?;

    let bar: S = alpha(k);
    let mut grants = Vec::with_capacity(n);
    for (id, bundle) in &out.grants {
        let full = kern.expand(bundle);
        let c = claimants.iter().find(|c| c.id == *id).expect("kernel grants cover the claimants");
        guarantee(c.value(&full) >= bar.clone() * c.target.clone(), || {
            format!("agent {id} expands to less than alpha times its target")
        })?;
        grants.push((*id, full));
    }

    trace.push(Step::Kernel(KernelStep {
        kernel,
        independent,
        anchors: kern.anchors.clone(),
        types: types
            .into_iter()
            .zip(seq.packings)
            .zip(kern.folded)
            .zip(kernel_mms)
            .map(|(((t, packing), folded), kernel_mms)| KernelType {
                utility: t.utility,
                target: t.target,
                folded,
                packing,
                kernel_mms,
            })
            .collect(),
        ratio: out.ratio,
    }));
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

    fn star3() -> GoodsGraph {
        GoodsGraph::with_indexed_vertices(4, &[(0, 1), (0, 2), (0, 3)]).unwrap()
    }

    /// Clique 0..6, each clique vertex with one pendant independent vertex.
    fn comb12() -> GoodsGraph {
        let mut e: Vec<(usize, usize)> = (0..6).flat_map(|a| (a + 1..6).map(move |b| (a, b))).collect();
        e.extend((0..6).map(|i| (i, i + 6)));
        GoodsGraph::with_indexed_vertices(12, &e).unwrap()
    }

    fn seq(packings: Vec<Vec<VertexSet>>) -> PackingSequence<Value> {
        PackingSequence { packings, k: 1, level: 0, beta: q(1, 1) }
    }

    #[test]
    fn beta_values() {
        for k in 0..=6 {
            assert_eq!(beta::<Value>(k, 0), q(1, 1));
            assert_eq!(beta::<Value>(k, k), q(4, 7 * (1 << k) - 3));
        }
        assert_eq!(beta::<Value>(1, 1), q(4, 11));
        assert_eq!(alpha::<Value>(0), q(3, 4));
    }

    #[test]
    fn levels_for_type_counts() {
        let got: Vec<usize> = (1..=9).map(level_for_types).collect();
        assert_eq!(got, vec![0, 1, 2, 2, 3, 3, 3, 3, 4]);
    }

    #[test]
    fn merge_without_independent_vertices_is_concatenation() {
        let a = vec![VertexSet::from([0, 1])];
        let b = vec![VertexSet::from([0]), VertexSet::from([1])];
        let u = vec![q(1, 1); 2];
        let out = merge_packings(seq(vec![a.clone()]), seq(vec![b.clone()]), &[&u, &u], &VertexSet::new()).unwrap();
        assert_eq!(out.packings, vec![a, b]);
        assert_eq!(out.level, 1);
    }

    #[test]
    fn single_shared_vertex_goes_to_the_first_bundle() {
        let u = vec![q(1, 1); 2];
        let left = seq(vec![vec![VertexSet::from([0, 1])]]);
        let right = seq(vec![vec![VertexSet::from([0, 1])]]);
        let out = merge_packings(left, right, &[&u, &u], &VertexSet::from([1])).unwrap();
        assert_eq!(out.packings, vec![vec![VertexSet::from([0, 1])], vec![VertexSet::from([0])]]);
    }

    #[test]
    fn star_merge_follows_the_twin_chain() {
        // Leaf 1 goes to the first bundle and leaves the twin {0,1,3}; the
        // twin then takes 3, emptying {3}; the rescan hands 2 to the first
        // bundle and empties {2}.
        let u1 = vec![q(0, 1), q(3, 1), q(2, 1), q(1, 1)];
        let u2 = vec![q(0, 1), q(1, 1), q(2, 1), q(3, 1)];
        let left = seq(vec![vec![VertexSet::from([0, 1, 2]), VertexSet::from([3])]]);
        let right = seq(vec![vec![VertexSet::from([0, 1, 3]), VertexSet::from([2])]]);
        let out = merge_packings(left, right, &[&u1, &u2], &VertexSet::from([1, 2, 3])).unwrap();
        assert_eq!(out.packings[0], vec![VertexSet::from([0, 1, 2]), VertexSet::new()]);
        assert_eq!(out.packings[1], vec![VertexSet::from([0, 3]), VertexSet::new()]);
    }

    #[test]
    fn merge_rejects_a_vertex_covered_once() {
        let u = vec![q(1, 1); 2];
        let left = seq(vec![vec![VertexSet::from([0, 1])]]);
        let right = seq(vec![vec![VertexSet::from([0])]]);
        assert!(matches!(merge_packings(left, right, &[&u, &u], &VertexSet::from([1])), Err(Error::Structural(_))));
    }

    #[test]
    fn star_contracts_to_its_centre() {
        let g = star3();
        let u = vec![q(1, 1), q(2, 1), q(3, 1), q(4, 1)];
        let types = vec![AgentType { utility: u, target: q(10, 1) }];
        let s = PackingSequence { packings: vec![vec![VertexSet::from([0, 1, 2, 3])]], k: 0, level: 0, beta: q(1, 1) };
        let kern = contract_to_kernel(&g, &VertexSet::from([0]), &VertexSet::from([1, 2, 3]), &s, &types).unwrap();
        assert_eq!(kern.anchors, BTreeMap::from([(1, 0), (2, 0), (3, 0)]));
        assert_eq!(kern.folded[0][0], q(10, 1));
        assert_eq!(kern.expand(&VertexSet::from([0])), VertexSet::from([0, 1, 2, 3]));
    }

    #[test]
    fn lone_independent_bundle_has_no_anchor() {
        let g = star3();
        let types = vec![AgentType { utility: vec![q(1, 1); 4], target: q(1, 1) }];
        let s = PackingSequence {
            packings: vec![vec![VertexSet::from([0, 1, 2]), VertexSet::from([3])]],
            k: 0,
            level: 0,
            beta: q(1, 1),
        };
        let r = contract_to_kernel(&g, &VertexSet::from([0]), &VertexSet::from([1, 2, 3]), &s, &types);
        assert!(matches!(r, Err(Error::InternalGuarantee(_))));
    }

    fn run(inst: &Instance<Value>) -> Outcome<Value> {
        let out = allocate_split(inst, &OracleConfig::default()).unwrap();
        let k = level_for_types(inst.type_count());
        let cert = check_allocation(inst, &out.allocation, &alpha(k), &out.records);
        assert!(cert.passes(), "{cert:?}");
        out
    }

    #[test]
    fn uniform_star_gives_three_quarters() {
        let inst = Instance::from_utilities(star3(), vec![vec![q(1, 1); 4]; 2]).unwrap();
        let out = run(&inst);
        assert!(out.records.iter().all(|r| r.value == q(1, 1)));
        assert!(out.allocation.min_ratio() >= q(3, 4));
    }

    #[test]
    fn two_types_on_the_comb() {
        let u1 = vec![q(1, 1); 12];
        let u2: Vec<Value> = (0..12).map(|v| if v < 6 { q(3, 2) } else { q(1, 1) }).collect();
        let inst = Instance::from_utilities(comb12(), vec![u1, u2]).unwrap();
        let out = run(&inst);
        assert!(out.trace.reductions().next().unwrap().peeled.is_empty());
        let kernel = out.trace.kernels().next().expect("the bounded pipeline ran");
        assert_eq!(kernel.kernel, (0..6).collect());
        let merge = out.trace.merges().next().expect("two types merge once");
        assert_eq!(merge.beta, q(4, 11));
        for (t, share) in kernel.types.iter().zip(&out.records) {
            for p in &t.packing {
                assert_eq!(total(&t.folded, p.intersection(&kernel.kernel)), total(&t.utility, p));
                assert!(total(&t.utility, p) >= q(4, 11) * share.value.clone());
            }
        }
    }

    #[test]
    fn not_split_is_rejected() {
        let g = GoodsGraph::with_indexed_vertices(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let inst = Instance::from_utilities(g, vec![vec![q(1, 1); 4]]).unwrap();
        assert!(matches!(allocate_split(&inst, &OracleConfig::default()), Err(Error::ClassMismatch { .. })));
    }
}
