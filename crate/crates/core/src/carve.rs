//! Greedy carving of consecutive segments along a vertex order, and
//! completion of packings into partitions.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{AgentId, GoodsGraph, Vertex, VertexSet};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct CarveAgent<'a, S> {
    pub id: AgentId,
    pub utility: &'a [S],
    pub threshold: S,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarveResult {
    /// Consecutive segments in the order they were cut.
    pub assignments: Vec<(AgentId, Vec<Vertex>)>,
    /// The unconsumed suffix, including a reserved last vertex.
    pub leftover: Vec<Vertex>,
    pub served: BTreeSet<AgentId>,
}

/// Scans `order` left to right. As soon as the current segment reaches the
/// threshold of some pooled agent, the smallest such agent takes it and a
/// new segment starts. With `reserve_last` the final vertex is never used.
pub fn greedy_prefix_carve<S: Scalar>(order: &[Vertex], pool: &[CarveAgent<'_, S>], reserve_last: bool) -> CarveResult {
    let mut active: Vec<&CarveAgent<'_, S>> = pool.iter().collect();
    active.sort_by_key(|a| a.id);
    let limit = if reserve_last { order.len().saturating_sub(1) } else { order.len() };
    let mut sums = vec![S::zero(); active.len()];
    let mut assignments = Vec::new();
    let mut start = 0;
    for pos in 0..limit {
        if active.is_empty() {
            break;
        }
        let v = order[pos];
        for (sum, a) in sums.iter_mut().zip(&active) {
            *sum = sum.clone() + a.utility[v].clone();
        }
        if let Some(j) = (0..active.len()).find(|&j| sums[j] >= active[j].threshold) {
            assignments.push((active[j].id, order[start..=pos].to_vec()));
            active.remove(j);
            sums = vec![S::zero(); active.len()];
            start = pos + 1;
        }
    }
    let served = assignments.iter().map(|(a, _)| *a).collect();
    CarveResult { assignments, leftover: order[start..].to_vec(), served }
}

/// Extends the bundles until they cover `region`: repeatedly the smallest
/// uncovered vertex adjacent to some nonempty bundle joins the first such
/// bundle. Bundles stay connected and only grow.
pub fn complete_to_partition<K>(graph: &GoodsGraph, region: &VertexSet, bundles: &mut [(K, VertexSet)]) -> Result<()> {
    let mut covered: VertexSet = bundles.iter().flat_map(|(_, s)| s.iter().copied()).collect();
    loop {
        let next = region.iter().copied().filter(|v| !covered.contains(v)).find_map(|v| {
            bundles.iter().position(|(_, s)| graph.neighbors(v).iter().any(|w| s.contains(w))).map(|b| (v, b))
        });
        match next {
            Some((v, b)) => {
                bundles[b].1.insert(v);
                covered.insert(v);
            }
            None => break,
        }
    }
    if region.iter().any(|v| !covered.contains(v)) {
        return Err(Error::Structural("some component of the region holds no bundle to attach to".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Value;

    fn q(n: i64) -> Value {
        Value::from_integer(n.into())
    }

    #[test]
    fn single_agent_takes_the_forced_prefix() {
        let u = vec![q(1); 3];
        let pool = [CarveAgent { id: 1, utility: &u[..], threshold: q(2) }];
        for reserve in [false, true] {
            let r = greedy_prefix_carve(&[0, 1, 2], &pool, reserve);
            assert_eq!(r.assignments, vec![(1, vec![0, 1])]);
            assert_eq!(r.leftover, vec![2]);
        }
    }

    #[test]
    fn two_agents_take_single_vertices() {
        let u = vec![q(1); 4];
        let pool = [
            CarveAgent { id: 2, utility: &u[..], threshold: q(1) },
            CarveAgent { id: 1, utility: &u[..], threshold: q(1) },
        ];
        let r = greedy_prefix_carve(&[0, 1, 2, 3], &pool, false);
        assert_eq!(r.assignments, vec![(1, vec![0]), (2, vec![1])]);
        assert_eq!(r.leftover, vec![2, 3]);
        assert_eq!(r.served, BTreeSet::from([1, 2]));
    }

    #[test]
    fn reserved_vertex_is_never_taken() {
        let u = [q(0), q(0), q(5)];
        let pool = [CarveAgent { id: 1, utility: &u[..], threshold: q(1) }];
        let r = greedy_prefix_carve(&[0, 1, 2], &pool, true);
        assert!(r.assignments.is_empty());
        assert_eq!(r.leftover, vec![0, 1, 2]);
    }

    #[test]
    fn completion_attaches_everything() {
        let g = GoodsGraph::with_indexed_vertices(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let mut bundles = vec![(1, VertexSet::from([1])), (2, VertexSet::from([4]))];
        complete_to_partition(&g, &g.all_vertices(), &mut bundles).unwrap();
        assert_eq!(bundles[0].1, VertexSet::from([0, 1, 2, 3]));
        assert_eq!(bundles[1].1, VertexSet::from([4]));
    }
}
