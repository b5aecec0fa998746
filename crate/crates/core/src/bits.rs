//! Bitmask view of an induced subgraph, shared by the exhaustive searches.

use crate::model::{GoodsGraph, Vertex, VertexSet};
use crate::scalar::Scalar;

pub(crate) type Mask = u64;

pub(crate) fn low_bit(m: Mask) -> Mask {
    m & m.wrapping_neg()
}

pub(crate) fn count(m: Mask) -> usize {
    m.count_ones() as usize
}

/// The induced subgraph on a region, with local indices `0..len` in
/// increasing vertex order.
#[derive(Debug, Clone)]
pub(crate) struct Local {
    pub verts: Vec<Vertex>,
    pub adj: Vec<Mask>,
}

impl Local {
    pub fn new(graph: &GoodsGraph, region: &VertexSet) -> Self {
        let verts: Vec<Vertex> = region.iter().copied().collect();
        assert!(verts.len() <= 64, "bitmask search supports at most 64 vertices");
        let adj = verts
            .iter()
            .map(|&v| verts.iter().enumerate().filter(|&(_, &w)| graph.adjacent(v, w)).fold(0, |m, (j, _)| m | 1 << j))
            .collect();
        Local { verts, adj }
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn full(&self) -> Mask {
        if self.len() == 64 {
            Mask::MAX
        } else {
            (1 << self.len()) - 1
        }
    }

    pub fn to_set(&self, m: Mask) -> VertexSet {
        (0..self.len()).filter(|&j| m >> j & 1 == 1).map(|j| self.verts[j]).collect()
    }

    pub fn neighbors(&self, bit: Mask) -> Mask {
        self.adj[bit.trailing_zeros() as usize]
    }

    /// Vertices of `within` reachable from `start` (a single bit).
    pub fn reach(&self, within: Mask, start: Mask) -> Mask {
        let mut seen = start;
        let mut frontier = start;
        while frontier != 0 {
            let b = low_bit(frontier);
            frontier &= !b;
            let new = self.neighbors(b) & within & !seen;
            seen |= new;
            frontier |= new;
        }
        seen
    }

    pub fn is_connected(&self, m: Mask) -> bool {
        m == 0 || self.reach(m, low_bit(m)) == m
    }

    pub fn components(&self, mut m: Mask) -> usize {
        let mut c = 0;
        while m != 0 {
            m &= !self.reach(m, low_bit(m));
            c += 1;
        }
        c
    }

    pub fn component_masks(&self, mut m: Mask) -> Vec<Mask> {
        let mut out = Vec::new();
        while m != 0 {
            let c = self.reach(m, low_bit(m));
            m &= !c;
            out.push(c);
        }
        out
    }

    /// `u(S)` for every subset of the region.
    pub fn subset_sums<S: Scalar>(&self, utility: &[S]) -> Vec<S> {
        let mut sums = Vec::with_capacity(1 << self.len());
        sums.push(S::zero());
        for m in 1..=self.full() {
            let b = m.trailing_zeros() as usize;
            let v = sums[(m & (m - 1)) as usize].clone() + utility[self.verts[b]].clone();
            sums.push(v);
        }
        sums
    }
}

/// Enumerates every connected subset of `region` that contains `root`,
/// each exactly once, parents before their extensions. Passing
/// `descend = false` to [`ConnectedSets::next`] skips the extensions of the
/// set returned by the previous call.
pub(crate) struct ConnectedSets<'a> {
    adj: &'a [Mask],
    region: Mask,
    root: Mask,
    started: bool,
    // (set, candidate extensions, excluded vertices)
    stack: Vec<(Mask, Mask, Mask)>,
}

impl<'a> ConnectedSets<'a> {
    pub fn new(local: &'a Local, root: Mask, region: Mask) -> Self {
        ConnectedSets { adj: &local.adj, region, root, started: false, stack: Vec::new() }
    }

    pub fn next(&mut self, descend: bool) -> Option<Mask> {
        if !self.started {
            self.started = true;
            let cand = self.adj[self.root.trailing_zeros() as usize] & self.region & !self.root;
            self.stack.push((self.root, cand, 0));
            return Some(self.root);
        }
        if !descend {
            self.stack.pop();
        }
        loop {
            let top = self.stack.last_mut()?;
            if top.1 == 0 {
                self.stack.pop();
                continue;
            }
            let w = low_bit(top.1);
            top.1 &= !w;
            let set = top.0 | w;
            let forb = top.2;
            let cand = (top.1 | (self.adj[w.trailing_zeros() as usize] & self.region)) & !set & !forb;
            top.2 |= w;
            self.stack.push((set, cand, forb));
            return Some(set);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_connected_containing(local: &Local, root: Mask, region: Mask) -> Vec<Mask> {
        let mut out: Vec<Mask> =
            (1..=region).filter(|&m| m & !region == 0 && m & root != 0 && local.is_connected(m)).collect();
        out.sort_unstable();
        out
    }

    #[test]
    fn connected_sets_match_brute_force() {
        // C5 plus a chord and a pendant
        let g =
            GoodsGraph::with_indexed_vertices(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (1, 3), (4, 5)]).unwrap();
        let local = Local::new(&g, &g.all_vertices());
        for region in [local.full(), 0b101011, 0b111110] {
            let root = low_bit(region);
            let mut it = ConnectedSets::new(&local, root, region);
            let mut got = Vec::new();
            while let Some(s) = it.next(true) {
                got.push(s);
            }
            let n = got.len();
            got.sort_unstable();
            got.dedup();
            assert_eq!(got.len(), n, "duplicates");
            assert_eq!(got, all_connected_containing(&local, root, region));
        }
    }

    #[test]
    fn skipping_descent_prunes_supersets() {
        let g = GoodsGraph::with_indexed_vertices(3, &[(0, 1), (1, 2)]).unwrap();
        let local = Local::new(&g, &g.all_vertices());
        let mut it = ConnectedSets::new(&local, 1, local.full());
        assert_eq!(it.next(true), Some(0b001));
        assert_eq!(it.next(false), None);
    }
}
