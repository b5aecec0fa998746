//! Exact maximin shares and max-min-ratio allocations by exhaustive
//! branch and bound over connected partitions.
//!
//! Every search works on bitmasks over a region of at most
//! [`OracleConfig::cap`] vertices. Parts are generated in canonical order:
//! each new part contains the smallest vertex not yet covered.

use std::collections::BTreeMap;

use crate::bits::{count, low_bit, ConnectedSets, Local, Mask};
use crate::error::{Error, Result};
use crate::model::{Agent, AgentId, Allocation, GoodsGraph, Instance, Packing, VertexSet};
use crate::scalar::{share_ratio, Scalar};

/// Hard ceiling on the enumeration cap; subset-sum tables have `2^cap` entries.
pub const MAX_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub cap: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { cap: 14 }
    }
}

impl OracleConfig {
    pub fn with_cap(cap: usize) -> Self {
        OracleConfig { cap }
    }

    fn admit(&self, vertices: usize) -> Result<()> {
        let cap = self.cap.min(MAX_CAP);
        if vertices > cap {
            Err(Error::SizeLimit { vertices, cap })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShareKind {
    Mms,
    Pmms,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MmsRecord<S> {
    pub agent: AgentId,
    pub n: usize,
    pub value: S,
    /// `n` bundles labelled `1..=n`, each worth at least `value`.
    pub witness: Packing,
    pub kind: ShareKind,
}

impl<S> MmsRecord<S> {
    pub fn bundles(&self) -> Vec<VertexSet> {
        self.witness.bundles().iter().map(|(_, s)| s.clone()).collect()
    }
}

fn labelled(bundles: Vec<VertexSet>) -> Packing {
    Packing::new(bundles.into_iter().enumerate().map(|(i, s)| (i + 1, s)).collect())
}

fn improves<S: Scalar>(best: &Option<S>, v: &S) -> bool {
    best.as_ref().is_none_or(|b| v > b)
}

fn min_opt<S: Scalar>(cur: &Option<S>, v: &S) -> S {
    match cur {
        Some(c) if c < v => c.clone(),
        _ => v.clone(),
    }
}

struct MmsSearch<'a, S> {
    local: &'a Local,
    sums: Vec<S>,
    best: Option<S>,
    best_parts: Vec<Mask>,
    parts: Vec<Mask>,
}

impl<S: Scalar> MmsSearch<'_, S> {
    fn beats(&self, total: &S, k: usize) -> bool {
        self.best.as_ref().is_none_or(|b| *total > b.clone() * S::from_count(k))
    }

    fn run(&mut self, rest: Mask, k: usize, cur: Option<S>) {
        if let (Some(c), Some(b)) = (&cur, &self.best) {
            if c <= b {
                return;
            }
        }
        if k == 1 {
            if self.local.is_connected(rest) {
                let v = min_opt(&cur, &self.sums[rest as usize]);
                if improves(&self.best, &v) {
                    self.best = Some(v);
                    self.best_parts = self.parts.clone();
                    self.best_parts.push(rest);
                }
            }
            return;
        }
        if !self.beats(&self.sums[rest as usize], k) {
            return;
        }
        let local = self.local;
        let mut sets = ConnectedSets::new(local, low_bit(rest), rest);
        let mut descend = true;
        while let Some(s) = sets.next(descend) {
            let after = rest & !s;
            descend = count(after) >= k - 1 && self.beats(&self.sums[after as usize], k - 1);
            if !descend {
                continue;
            }
            let v = self.sums[s as usize].clone();
            if !improves(&self.best, &v) || local.components(after) > k - 1 {
                continue;
            }
            self.parts.push(s);
            self.run(after, k - 1, Some(min_opt(&cur, &v)));
            self.parts.pop();
        }
    }
}

/// `mms^(n)` of `utility` on the induced subgraph on `region`, with a
/// witness partition of exactly `n` bundles (empty ones when `|region| < n`).
pub fn mms_in<S: Scalar>(
    graph: &GoodsGraph,
    region: &VertexSet,
    utility: &[S],
    n: usize,
    config: &OracleConfig,
) -> Result<(S, Vec<VertexSet>)> {
    if n == 0 {
        return Err(Error::InvalidInput("bundle count must be positive".into()));
    }
    config.admit(region.len())?;
    let local = Local::new(graph, region);
    let comps = local.component_masks(local.full());
    if comps.len() > n {
        return Err(Error::UndefinedMms { components: comps.len(), bundles: n });
    }
    if local.len() < n {
        let mut parts: Vec<VertexSet> = comps.iter().map(|&c| local.to_set(c)).collect();
        parts.resize(n, VertexSet::new());
        return Ok((S::zero(), parts));
    }
    let mut search = MmsSearch {
        local: &local,
        sums: local.subset_sums(utility),
        best: None,
        best_parts: Vec::new(),
        parts: Vec::new(),
    };
    search.run(local.full(), n, None);
    let value = search.best.expect("a partition into n connected parts exists");
    Ok((value, search.best_parts.iter().map(|&m| local.to_set(m)).collect()))
}

pub fn mms<S: Scalar>(graph: &GoodsGraph, agent: &Agent<S>, n: usize, config: &OracleConfig) -> Result<MmsRecord<S>> {
    let (value, parts) = mms_in(graph, &graph.all_vertices(), &agent.utility, n, config)?;
    Ok(MmsRecord { agent: agent.id, n, value, witness: labelled(parts), kind: ShareKind::Mms })
}

struct PackSearch<'a, S> {
    local: &'a Local,
    sums: Vec<S>,
    best: S,
    best_parts: Vec<Mask>,
    parts: Vec<Mask>,
}

impl<S: Scalar> PackSearch<'_, S> {
    fn run(&mut self, avail: Mask, k: usize, cur: Option<S>) {
        if k == 0 {
            let v = cur.expect("at least one bundle placed");
            if v > self.best {
                self.best = v;
                self.best_parts = self.parts.clone();
            }
            return;
        }
        if avail == 0 || self.sums[avail as usize] <= self.best.clone() * S::from_count(k) {
            return;
        }
        if cur.as_ref().is_some_and(|c| *c <= self.best) {
            return;
        }
        let local = self.local;
        let root = low_bit(avail);
        let mut sets = ConnectedSets::new(local, root, avail);
        let mut descend = true;
        while let Some(s) = sets.next(descend) {
            let after = avail & !s;
            descend = k == 1
                || (count(after) >= k - 1 && self.sums[after as usize] > self.best.clone() * S::from_count(k - 1));
            if !descend {
                continue;
            }
            let v = self.sums[s as usize].clone();
            if v <= self.best {
                continue;
            }
            self.parts.push(s);
            self.run(after, k - 1, Some(min_opt(&cur, &v)));
            self.parts.pop();
        }
        self.run(avail & !root, k, cur);
    }
}

/// `pmms^(n)` by direct search over packings. Each vertex, smallest first,
/// either starts a new bundle or is left out.
pub fn pmms_in<S: Scalar>(
    graph: &GoodsGraph,
    region: &VertexSet,
    utility: &[S],
    n: usize,
    config: &OracleConfig,
) -> Result<(S, Vec<VertexSet>)> {
    if n == 0 {
        return Err(Error::InvalidInput("bundle count must be positive".into()));
    }
    config.admit(region.len())?;
    let local = Local::new(graph, region);
    let mut search = PackSearch {
        local: &local,
        sums: local.subset_sums(utility),
        best: S::zero(),
        best_parts: vec![0; n],
        parts: Vec::new(),
    };
    search.run(local.full(), n, None);
    Ok((search.best, search.best_parts.iter().map(|&m| local.to_set(m)).collect()))
}

pub fn pmms<S: Scalar>(graph: &GoodsGraph, agent: &Agent<S>, n: usize, config: &OracleConfig) -> Result<MmsRecord<S>> {
    let (value, parts) = pmms_in(graph, &graph.all_vertices(), &agent.utility, n, config)?;
    Ok(MmsRecord { agent: agent.id, n, value, witness: labelled(parts), kind: ShareKind::Pmms })
}

/// `pmms^(n)` from per-component maximin shares: the best way to split the
/// `n` bundles among the components. Much faster than [`pmms_in`] and agrees
/// with it by the connected-case identity `pmms = mms`.
pub fn pmms_via_components<S: Scalar>(
    graph: &GoodsGraph,
    region: &VertexSet,
    utility: &[S],
    n: usize,
    config: &OracleConfig,
) -> Result<(S, Vec<VertexSet>)> {
    if n == 0 {
        return Err(Error::InvalidInput("bundle count must be positive".into()));
    }
    config.admit(region.len())?;
    let comps = crate::graphs::components_within(graph, region);
    if comps.len() == 1 {
        return mms_in(graph, region, utility, n, config);
    }
    // table[j][t-1] = mms^(t) of component j
    let mut table: Vec<Vec<(S, Vec<VertexSet>)>> = Vec::with_capacity(comps.len());
    for c in &comps {
        let row = (1..=n).map(|t| mms_in(graph, c, utility, t, config)).collect::<Result<_>>()?;
        table.push(row);
    }
    let mut best: Option<(S, Vec<usize>)> = None;
    let mut counts = vec![0usize; comps.len()];
    split_counts(&table, 0, n, None, &mut counts, &mut best);
    let mut parts: Vec<VertexSet> = Vec::with_capacity(n);
    if let Some((value, counts)) = best {
        for (j, &t) in counts.iter().enumerate() {
            if t > 0 {
                parts.extend(table[j][t - 1].1.iter().cloned());
            }
        }
        parts.resize(n, VertexSet::new());
        Ok((value, parts))
    } else {
        Ok((S::zero(), vec![VertexSet::new(); n]))
    }
}

fn split_counts<S: Scalar>(
    table: &[Vec<(S, Vec<VertexSet>)>],
    j: usize,
    left: usize,
    cur: Option<S>,
    counts: &mut Vec<usize>,
    best: &mut Option<(S, Vec<usize>)>,
) {
    if j == table.len() {
        if left == 0 {
            if let Some(v) = cur {
                if best.as_ref().is_none_or(|(b, _)| v > *b) {
                    *best = Some((v, counts.clone()));
                }
            }
        }
        return;
    }
    for t in 0..=left {
        counts[j] = t;
        let next = if t == 0 { cur.clone() } else { Some(min_opt(&cur, &table[j][t - 1].0)) };
        split_counts(table, j + 1, left - t, next, counts, best);
    }
    counts[j] = 0;
}

/// Maximin shares of every agent for `n = inst.n()`, computed once per
/// distinct utility. Fails when the graph has more than `n` components.
pub fn mms_records<S: Scalar>(inst: &Instance<S>, config: &OracleConfig) -> Result<Vec<MmsRecord<S>>> {
    shares_by_type(inst, |u| mms_in(&inst.graph, &inst.graph.all_vertices(), u, inst.n(), config), ShareKind::Mms)
}

/// Packing maximin shares of every agent, via [`pmms_via_components`].
pub fn pmms_records<S: Scalar>(inst: &Instance<S>, config: &OracleConfig) -> Result<Vec<MmsRecord<S>>> {
    shares_by_type(
        inst,
        |u| pmms_via_components(&inst.graph, &inst.graph.all_vertices(), u, inst.n(), config),
        ShareKind::Pmms,
    )
}

fn shares_by_type<S: Scalar>(
    inst: &Instance<S>,
    mut compute: impl FnMut(&[S]) -> Result<(S, Vec<VertexSet>)>,
    kind: ShareKind,
) -> Result<Vec<MmsRecord<S>>> {
    let mut cache: Vec<(&Vec<S>, S, Packing)> = Vec::new();
    let mut out = Vec::with_capacity(inst.n());
    for a in &inst.agents {
        let hit = cache.iter().position(|(u, _, _)| **u == a.utility);
        let (value, witness) = match hit {
            Some(i) => (cache[i].1.clone(), cache[i].2.clone()),
            None => {
                let (value, parts) = compute(&a.utility)?;
                let witness = labelled(parts);
                cache.push((&a.utility, value.clone(), witness.clone()));
                (value, witness)
            }
        };
        out.push(MmsRecord { agent: a.id, n: inst.n(), value, witness, kind });
    }
    Ok(out)
}

/// One agent's view in a max-min-ratio search.
#[derive(Debug, Clone)]
pub struct RatioAgent<'a, S> {
    pub id: AgentId,
    pub utility: &'a [S],
    pub target: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioOutcome<S> {
    pub grants: Vec<(AgentId, VertexSet)>,
    /// Smallest `u_i(A_i) / target_i` over agents with a positive target;
    /// one when there are none.
    pub ratio: S,
}

struct RatioSearch<'a, S> {
    local: &'a Local,
    sums: Vec<Vec<S>>,
    targets: Vec<S>,
    needs: Vec<Option<S>>,
    best: Option<S>,
    best_parts: Vec<(usize, Mask)>,
    parts: Vec<(usize, Mask)>,
}

impl<S: Scalar> RatioSearch<'_, S> {
    fn ratio(&self, a: usize, m: Mask) -> S {
        self.sums[a][m as usize].clone() / self.targets[a].clone()
    }

    fn open(&self, a: usize, m: Mask) -> bool {
        self.needs[a].as_ref().is_none_or(|need| self.sums[a][m as usize] > *need)
    }

    fn record(&mut self, v: S) {
        self.needs = self.targets.iter().map(|t| Some(v.clone() * t.clone())).collect();
        self.best = Some(v);
        self.best_parts = self.parts.clone();
    }

    fn run(&mut self, rest: Mask, unserved: &[usize], cur: Option<S>) {
        if let (Some(c), Some(b)) = (&cur, &self.best) {
            if c <= b {
                return;
            }
        }
        if unserved.iter().any(|&a| !self.open(a, rest)) {
            return;
        }
        if let [a] = *unserved {
            if self.local.is_connected(rest) {
                let v = min_opt(&cur, &self.ratio(a, rest));
                if improves(&self.best, &v) {
                    self.parts.push((a, rest));
                    self.record(v);
                    self.parts.pop();
                }
            }
            return;
        }
        let k = unserved.len();
        let local = self.local;
        let mut sets = ConnectedSets::new(local, low_bit(rest), rest);
        let mut descend = true;
        while let Some(s) = sets.next(descend) {
            let after = rest & !s;
            let failing: Vec<usize> = unserved.iter().copied().filter(|&a| !self.open(a, after)).collect();
            descend = count(after) >= k - 1 && failing.len() < 2;
            if !descend || local.components(after) > k - 1 {
                continue;
            }
            let takers: Vec<usize> = if failing.is_empty() { unserved.to_vec() } else { failing };
            for a in takers {
                let r = self.ratio(a, s);
                if !improves(&self.best, &r) {
                    continue;
                }
                let others: Vec<usize> = unserved.iter().copied().filter(|&b| b != a).collect();
                self.parts.push((a, s));
                self.run(after, &others, Some(min_opt(&cur, &r)));
                self.parts.pop();
            }
        }
    }
}

/// Partition of the connected region into one bundle per agent with a
/// positive target, maximizing the smallest `u_i(A_i) / target_i`. Agents
/// with a zero target receive empty bundles. Among optimal partitions the
/// first one in search order is returned.
pub fn max_min_ratio_in<S: Scalar>(
    graph: &GoodsGraph,
    region: &VertexSet,
    agents: &[RatioAgent<'_, S>],
    config: &OracleConfig,
) -> Result<RatioOutcome<S>> {
    config.admit(region.len())?;
    let local = Local::new(graph, region);
    if !local.is_connected(local.full()) {
        return Err(Error::Structural("max-min-ratio search needs a connected region".into()));
    }
    let mut order: Vec<&RatioAgent<'_, S>> = agents.iter().collect();
    order.sort_by_key(|a| a.id);
    let active: Vec<&RatioAgent<'_, S>> = order.iter().copied().filter(|a| a.target > S::zero()).collect();
    let mut grants: Vec<(AgentId, VertexSet)> =
        order.iter().filter(|a| a.target <= S::zero()).map(|a| (a.id, VertexSet::new())).collect();
    if active.is_empty() {
        return Ok(RatioOutcome { grants, ratio: S::one() });
    }
    if local.len() < active.len() {
        for (j, a) in active.iter().enumerate() {
            let set = if j < local.len() { VertexSet::from([local.verts[j]]) } else { VertexSet::new() };
            grants.push((a.id, set));
        }
        grants.sort_by_key(|(a, _)| *a);
        return Ok(RatioOutcome { grants, ratio: S::zero() });
    }
    let mut search = RatioSearch {
        local: &local,
        sums: active.iter().map(|a| local.subset_sums(a.utility)).collect(),
        targets: active.iter().map(|a| a.target.clone()).collect(),
        needs: vec![None; active.len()],
        best: None,
        best_parts: Vec::new(),
        parts: Vec::new(),
    };
    let all: Vec<usize> = (0..active.len()).collect();
    search.run(local.full(), &all, None);
    let ratio = search.best.expect("a connected partition with one part per agent exists");
    for &(a, m) in &search.best_parts {
        grants.push((active[a].id, local.to_set(m)));
    }
    grants.sort_by_key(|(a, _)| *a);
    Ok(RatioOutcome { grants, ratio })
}

/// [`max_min_ratio_in`] on the whole graph, packaged as an allocation whose
/// per-agent ratios are taken against `targets`.
pub fn max_min_ratio_allocation<S: Scalar>(
    graph: &GoodsGraph,
    agents: &[Agent<S>],
    targets: &BTreeMap<AgentId, S>,
    config: &OracleConfig,
) -> Result<Allocation<S>> {
    let views: Vec<RatioAgent<'_, S>> = agents
        .iter()
        .map(|a| RatioAgent {
            id: a.id,
            utility: &a.utility,
            target: targets.get(&a.id).cloned().unwrap_or_else(S::zero),
        })
        .collect();
    let out = max_min_ratio_in(graph, &graph.all_vertices(), &views, config)?;
    let per_agent_ratio = out
        .grants
        .iter()
        .map(|(id, set)| {
            let v = views.iter().find(|v| v.id == *id).expect("granted agents come from the input");
            (*id, share_ratio(&crate::scalar::total(v.utility, set), &v.target))
        })
        .collect();
    Ok(Allocation { packing: Packing::new(out.grants), target_alpha: S::zero(), per_agent_ratio })
}

/// Calls `visit` once for every partition of the graph into at most `n`
/// nonempty connected parts, padded with empty bundles to length `n`.
pub fn for_each_connected_partition<S>(
    graph: &GoodsGraph,
    n: usize,
    config: &OracleConfig,
    mut visit: impl FnMut(&[VertexSet]) -> S,
) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("bundle count must be positive".into()));
    }
    config.admit(graph.len())?;
    let local = Local::new(graph, &graph.all_vertices());
    let mut parts = Vec::with_capacity(n);
    let mut emit = |parts: &[Mask]| {
        let mut sets: Vec<VertexSet> = parts.iter().map(|&m| local.to_set(m)).collect();
        sets.resize(n, VertexSet::new());
        visit(&sets);
    };
    if graph.is_empty() {
        emit(&[]);
        return Ok(());
    }
    partitions_rec(&local, local.full(), n, &mut parts, &mut emit);
    Ok(())
}

fn partitions_rec(local: &Local, rest: Mask, k: usize, parts: &mut Vec<Mask>, emit: &mut dyn FnMut(&[Mask])) {
    if local.is_connected(rest) {
        parts.push(rest);
        emit(parts);
        parts.pop();
    }
    if k < 2 {
        return;
    }
    let mut sets = ConnectedSets::new(local, low_bit(rest), rest);
    while let Some(s) = sets.next(true) {
        let after = rest & !s;
        if after == 0 || local.components(after) > k - 1 {
            continue;
        }
        parts.push(s);
        partitions_rec(local, after, k - 1, parts, emit);
        parts.pop();
    }
}

pub fn enumerate_connected_partitions(
    graph: &GoodsGraph,
    n: usize,
    config: &OracleConfig,
) -> Result<Vec<Vec<VertexSet>>> {
    let mut out = Vec::new();
    for_each_connected_partition(graph, n, config, |p| out.push(p.to_vec()))?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Value;

    fn q(n: i64) -> Value {
        Value::from_integer(n.into())
    }

    fn g(vs: &[&str], es: &[(&str, &str)]) -> GoodsGraph {
        GoodsGraph::new(vs.iter().copied(), es.iter().copied()).unwrap()
    }

    fn cfg() -> OracleConfig {
        OracleConfig::default()
    }

    fn named(graph: &GoodsGraph, parts: &[VertexSet]) -> Vec<Vec<String>> {
        let mut out: Vec<Vec<String>> =
            parts.iter().map(|p| graph.names(p).into_iter().map(String::from).collect()).collect();
        out.sort();
        out
    }

    #[test]
    fn partitions_of_a_path() {
        let path = g(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        let mut got: Vec<Vec<Vec<String>>> =
            enumerate_connected_partitions(&path, 2, &cfg()).unwrap().iter().map(|p| named(&path, p)).collect();
        got.sort();
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let mut want =
            vec![vec![s(&[]), s(&["a", "b", "c"])], vec![s(&["a"]), s(&["b", "c"])], vec![s(&["a", "b"]), s(&["c"])]];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn partitions_small_cases() {
        let k2 = g(&["a", "b"], &[("a", "b")]);
        assert_eq!(enumerate_connected_partitions(&k2, 2, &cfg()).unwrap().len(), 2);
        let path = g(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        let one = enumerate_connected_partitions(&path, 1, &cfg()).unwrap();
        assert_eq!(one, vec![vec![path.all_vertices()]]);
    }

    #[test]
    fn cap_is_enforced() {
        let big = GoodsGraph::with_indexed_vertices(15, &[]).unwrap();
        assert_eq!(enumerate_connected_partitions(&big, 2, &cfg()), Err(Error::SizeLimit { vertices: 15, cap: 14 }));
    }

    #[test]
    fn disconnected_example_separates_mms_and_pmms() {
        let gr = g(&["x", "y", "z"], &[("x", "y")]);
        let inst = Instance::from_utilities(gr, vec![vec![q(2), q(2), q(1)]; 2]).unwrap();
        let a = &inst.agents[0];
        assert_eq!(mms(&inst.graph, a, 2, &cfg()).unwrap().value, q(1));
        let p = pmms(&inst.graph, a, 2, &cfg()).unwrap();
        assert_eq!(p.value, q(2));
        assert_eq!(named(&inst.graph, &p.bundles()), vec![vec!["x".to_string()], vec!["y".to_string()]]);
        let (v, _) = pmms_via_components(&inst.graph, &inst.graph.all_vertices(), &a.utility, 2, &cfg()).unwrap();
        assert_eq!(v, q(2));
        assert_eq!(mms(&inst.graph, a, 1, &cfg()), Err(Error::UndefinedMms { components: 2, bundles: 1 }));
    }

    #[test]
    fn mms_small_values() {
        let path = g(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        let a = Agent { id: 1, type_id: 0, utility: vec![q(1); 3] };
        assert_eq!(mms(&path, &a, 2, &cfg()).unwrap().value, q(1));
        assert_eq!(mms(&path, &a, 1, &cfg()).unwrap().value, q(3));
        let r = pmms(&path, &a, 4, &cfg()).unwrap();
        assert_eq!(r.value, q(0));
        assert_eq!(r.witness.bundles().len(), 4);
        let r = mms(&path, &a, 4, &cfg()).unwrap();
        assert_eq!(r.value, q(0));
        assert!(r.witness.is_partition(&path));
    }

    #[test]
    fn ratio_search_on_triangle() {
        let k3 = g(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")]);
        let agents = vec![
            Agent { id: 1, type_id: 0, utility: vec![q(1); 3] },
            Agent { id: 2, type_id: 0, utility: vec![q(1); 3] },
        ];
        let targets = BTreeMap::from([(1, q(1)), (2, q(1))]);
        let alloc = max_min_ratio_allocation(&k3, &agents, &targets, &cfg()).unwrap();
        assert!(alloc.min_ratio() >= q(1));
        assert!(alloc.packing.is_partition(&k3));
    }

    #[test]
    fn ratio_search_gives_zero_target_agents_nothing() {
        let k3 = g(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")]);
        let u = vec![q(1); 3];
        let agents =
            [RatioAgent { id: 1, utility: &u[..], target: q(0) }, RatioAgent { id: 2, utility: &u[..], target: q(2) }];
        let out = max_min_ratio_in(&k3, &k3.all_vertices(), &agents, &cfg()).unwrap();
        assert_eq!(out.grants, vec![(1, VertexSet::new()), (2, k3.all_vertices())]);
        assert_eq!(out.ratio, Value::new(3.into(), 2.into()));
    }
}
