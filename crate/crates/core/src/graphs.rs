//! Connectivity, biconnected decomposition, class recognition and the
//! Hamiltonian paths used inside cycle and clique blocks.
//!
//! Most functions take a `region`: the vertex set of the induced subgraph
//! to work on. Passing `graph.all_vertices()` works on the whole graph.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{GoodsGraph, Vertex, VertexSet};

/// Components of the whole graph, each sorted, listed by smallest member.
pub fn connected_components(graph: &GoodsGraph) -> Vec<VertexSet> {
    components_within(graph, &graph.all_vertices())
}

pub fn components_within(graph: &GoodsGraph, region: &VertexSet) -> Vec<VertexSet> {
    let mut seen = VertexSet::new();
    let mut out = Vec::new();
    for &start in region {
        if seen.contains(&start) {
            continue;
        }
        let comp = reach(graph, region, start);
        seen.extend(comp.iter().copied());
        out.push(comp);
    }
    out
}

fn reach(graph: &GoodsGraph, region: &VertexSet, start: Vertex) -> VertexSet {
    let mut comp = VertexSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &w in graph.neighbors(v) {
            if region.contains(&w) && comp.insert(w) {
                queue.push_back(w);
            }
        }
    }
    comp
}

/// True iff `set` is empty, a singleton, or induces a connected subgraph.
pub fn is_connected_subset(graph: &GoodsGraph, set: &VertexSet) -> bool {
    match set.first() {
        None => true,
        Some(&start) => reach(graph, set, start).len() == set.len(),
    }
}

pub fn is_clique(graph: &GoodsGraph, set: &VertexSet) -> bool {
    set.iter().all(|&a| set.range(a + 1..).all(|&b| graph.adjacent(a, b)))
}

pub fn is_independent(graph: &GoodsGraph, set: &VertexSet) -> bool {
    set.iter().all(|&a| set.range(a + 1..).all(|&b| !graph.adjacent(a, b)))
}

fn degree_within(graph: &GoodsGraph, region: &VertexSet, v: Vertex) -> usize {
    graph.neighbors(v).iter().filter(|w| region.contains(w)).count()
}

/// True iff `set` induces a cycle (at least three vertices).
pub fn is_cycle(graph: &GoodsGraph, set: &VertexSet) -> bool {
    set.len() >= 3 && set.iter().all(|&v| degree_within(graph, set, v) == 2) && is_connected_subset(graph, set)
}

/// Maximal biconnected pieces of the induced subgraph on `region`, for
/// every component. An isolated vertex forms a block of its own.
pub fn blocks_within(graph: &GoodsGraph, region: &VertexSet) -> Vec<VertexSet> {
    let n = graph.len();
    let mut disc: Vec<Option<usize>> = vec![None; n];
    let mut low = vec![0usize; n];
    let mut timer = 0usize;
    let mut blocks = Vec::new();
    let nbrs =
        |v: Vertex| -> Vec<Vertex> { graph.neighbors(v).iter().copied().filter(|w| region.contains(w)).collect() };

    for &root in region {
        if disc[root].is_some() {
            continue;
        }
        disc[root] = Some(timer);
        low[root] = timer;
        timer += 1;
        let root_nbrs = nbrs(root);
        if root_nbrs.is_empty() {
            blocks.push(VertexSet::from([root]));
            continue;
        }
        let mut stack = vec![root];
        // (vertex, parent, neighbours, next neighbour index)
        let mut frames: Vec<(Vertex, Option<Vertex>, Vec<Vertex>, usize)> = vec![(root, None, root_nbrs, 0)];
        while let Some(frame) = frames.last_mut() {
            let (v, parent) = (frame.0, frame.1);
            if frame.3 < frame.2.len() {
                let w = frame.2[frame.3];
                frame.3 += 1;
                match disc[w] {
                    None => {
                        disc[w] = Some(timer);
                        low[w] = timer;
                        timer += 1;
                        stack.push(w);
                        frames.push((w, Some(v), nbrs(w), 0));
                    }
                    Some(d) if Some(w) != parent => low[v] = low[v].min(d),
                    Some(_) => {}
                }
            } else {
                frames.pop();
                if let Some(up) = frames.last() {
                    let p = up.0;
                    low[p] = low[p].min(low[v]);
                    if low[v] >= disc[p].expect("visited") {
                        let mut block = VertexSet::from([p]);
                        while let Some(x) = stack.pop() {
                            block.insert(x);
                            if x == v {
                                break;
                            }
                        }
                        blocks.push(block);
                    }
                }
            }
        }
    }
    blocks.sort_by(|a, b| a.iter().cmp(b.iter()));
    blocks
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCutTree {
    pub blocks: Vec<VertexSet>,
    pub cut_vertices: VertexSet,
    /// `(block index, cut vertex)` for every cut vertex of every block.
    pub tree_edges: Vec<(usize, Vertex)>,
    /// Leaves of the tree; the single block when there is only one.
    pub terminal_blocks: BTreeSet<usize>,
}

impl BlockCutTree {
    /// Cut vertices lying in block `b`.
    pub fn cuts_of(&self, b: usize) -> Vec<Vertex> {
        self.tree_edges.iter().filter(|(x, _)| *x == b).map(|&(_, c)| c).collect()
    }
}

pub fn block_cut_tree(graph: &GoodsGraph) -> Result<BlockCutTree> {
    block_cut_tree_within(graph, &graph.all_vertices())
}

pub fn block_cut_tree_within(graph: &GoodsGraph, region: &VertexSet) -> Result<BlockCutTree> {
    if region.is_empty() || components_within(graph, region).len() != 1 {
        return Err(Error::Structural("block-cut tree needs a connected graph".into()));
    }
    let blocks = blocks_within(graph, region);
    let mut count = vec![0usize; graph.len()];
    for b in &blocks {
        for &v in b {
            count[v] += 1;
        }
    }
    let cut_vertices: VertexSet = region.iter().copied().filter(|&v| count[v] >= 2).collect();
    let tree_edges: Vec<(usize, Vertex)> = blocks
        .iter()
        .enumerate()
        .flat_map(|(i, b)| b.iter().filter(|v| cut_vertices.contains(v)).map(move |&v| (i, v)))
        .collect();
    let terminal_blocks = if blocks.len() == 1 {
        BTreeSet::from([0])
    } else {
        (0..blocks.len()).filter(|&i| tree_edges.iter().filter(|(b, _)| *b == i).count() == 1).collect()
    };
    Ok(BlockCutTree { blocks, cut_vertices, tree_edges, terminal_blocks })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GraphClass {
    Connected,
    Complete,
    Cycle,
    Tree,
    BlockGraph,
    Cactus,
    BlockCactus,
    CompleteMultipartite,
    Split,
}

impl GraphClass {
    pub const ALL: [GraphClass; 9] = [
        GraphClass::Connected,
        GraphClass::Complete,
        GraphClass::Cycle,
        GraphClass::Tree,
        GraphClass::BlockGraph,
        GraphClass::Cactus,
        GraphClass::BlockCactus,
        GraphClass::CompleteMultipartite,
        GraphClass::Split,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GraphClass::Connected => "connected",
            GraphClass::Complete => "complete",
            GraphClass::Cycle => "cycle",
            GraphClass::Tree => "tree",
            GraphClass::BlockGraph => "block_graph",
            GraphClass::Cactus => "cactus",
            GraphClass::BlockCactus => "block_cactus",
            GraphClass::CompleteMultipartite => "complete_multipartite",
            GraphClass::Split => "split",
        }
    }
}

impl fmt::Display for GraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassWitness {
    pub flags: BTreeSet<GraphClass>,
    /// Parts of a complete multipartite graph, listed by smallest member.
    pub parts: Option<Vec<VertexSet>>,
    /// `(K, I)`: clique side and independent side of a split graph.
    pub split_pair: Option<(VertexSet, VertexSet)>,
}

impl ClassWitness {
    pub fn has(&self, class: GraphClass) -> bool {
        self.flags.contains(&class)
    }
}

pub fn recognize(graph: &GoodsGraph) -> ClassWitness {
    recognize_within(graph, &graph.all_vertices())
}

/// Every class the induced subgraph on `region` belongs to.
pub fn recognize_within(graph: &GoodsGraph, region: &VertexSet) -> ClassWitness {
    let mut flags = BTreeSet::new();
    let parts = multipartite_parts(graph, region);
    let split_pair = split_pair(graph, region);
    if region.is_empty() {
        return ClassWitness { flags, parts, split_pair };
    }
    let connected = components_within(graph, region).len() == 1;
    let edges: usize = region.iter().map(|&v| degree_within(graph, region, v)).sum::<usize>() / 2;
    let blocks = blocks_within(graph, region);
    let clique_block = |b: &VertexSet| is_clique(graph, b);
    let cycle_block = |b: &VertexSet| is_cycle(graph, b);

    if connected {
        flags.insert(GraphClass::Connected);
        if edges + 1 == region.len() {
            flags.insert(GraphClass::Tree);
        }
        if is_cycle(graph, region) {
            flags.insert(GraphClass::Cycle);
        }
    }
    if is_clique(graph, region) {
        flags.insert(GraphClass::Complete);
    }
    if blocks.iter().all(clique_block) {
        flags.insert(GraphClass::BlockGraph);
    }
    if blocks.iter().all(|b| b.len() <= 2 || cycle_block(b)) {
        flags.insert(GraphClass::Cactus);
    }
    if blocks.iter().all(|b| clique_block(b) || cycle_block(b)) {
        flags.insert(GraphClass::BlockCactus);
    }
    if parts.is_some() {
        flags.insert(GraphClass::CompleteMultipartite);
    }
    if split_pair.is_some() {
        flags.insert(GraphClass::Split);
    }
    ClassWitness { flags, parts, split_pair }
}

/// Parts of a complete multipartite induced subgraph: the components of
/// the complement, each of which must be independent.
pub fn multipartite_parts(graph: &GoodsGraph, region: &VertexSet) -> Option<Vec<VertexSet>> {
    if region.is_empty() {
        return None;
    }
    let mut seen = VertexSet::new();
    let mut parts = Vec::new();
    for &start in region {
        if seen.contains(&start) {
            continue;
        }
        let mut part = VertexSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in region {
                if w != v && !graph.adjacent(v, w) && part.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        if !is_independent(graph, &part) {
            return None;
        }
        seen.extend(part.iter().copied());
        parts.push(part);
    }
    Some(parts)
}

/// Split partition `(K, I)` of the induced subgraph with the largest
/// possible independent side; ties go to the lexicographically least
/// sorted `K`. `None` if the subgraph is not split.
pub fn split_pair(graph: &GoodsGraph, region: &VertexSet) -> Option<(VertexSet, VertexSet)> {
    if region.is_empty() {
        return None;
    }
    // Degree-sequence characterisation: the m highest-degree vertices form
    // a clique and the rest an independent set.
    let mut order: Vec<Vertex> = region.iter().copied().collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(degree_within(graph, region, v)), v));
    let m = order
        .iter()
        .enumerate()
        .filter(|&(i, &v)| degree_within(graph, region, v) >= i)
        .map(|(i, _)| i + 1)
        .max()
        .unwrap_or(0);
    let k0: VertexSet = order[..m].iter().copied().collect();
    let i0: VertexSet = order[m..].iter().copied().collect();
    if !is_clique(graph, &k0) || !is_independent(graph, &i0) {
        return None;
    }
    // Every split partition differs from (k0, i0) by moving at most one
    // vertex each way.
    let mut best: Option<VertexSet> = None;
    let drops = std::iter::once(None).chain(k0.iter().copied().map(Some));
    for drop in drops {
        let adds = std::iter::once(None).chain(i0.iter().copied().map(Some));
        for add in adds {
            let mut k = k0.clone();
            if let Some(x) = drop {
                k.remove(&x);
            }
            if let Some(z) = add {
                k.insert(z);
            }
            let rest: VertexSet = region.difference(&k).copied().collect();
            if !is_clique(graph, &k) || !is_independent(graph, &rest) {
                continue;
            }
            let better = match &best {
                None => true,
                Some(b) => k.len() < b.len() || (k.len() == b.len() && k.iter().lt(b.iter())),
            };
            if better {
                best = Some(k);
            }
        }
    }
    best.map(|k| {
        let rest = region.difference(&k).copied().collect();
        (k, rest)
    })
}

/// Hamiltonian path through a cycle or clique block ending at `endpoint`.
/// Cliques list the other vertices in id order; cycles are walked starting
/// from the smaller neighbour of `endpoint`.
pub fn hamiltonian_path_in_block(graph: &GoodsGraph, block: &VertexSet, endpoint: Vertex) -> Result<Vec<Vertex>> {
    if !block.contains(&endpoint) {
        return Err(Error::InvalidInput(format!("endpoint {} is not in the block", graph.id(endpoint))));
    }
    if is_clique(graph, block) {
        let mut path: Vec<Vertex> = block.iter().copied().filter(|&v| v != endpoint).collect();
        path.push(endpoint);
        return Ok(path);
    }
    if !is_cycle(graph, block) {
        return Err(Error::UnsupportedBlock);
    }
    let start = *graph.neighbors(endpoint).iter().find(|w| block.contains(w)).expect("cycle vertices have neighbours");
    let mut path = vec![start];
    let (mut prev, mut cur) = (endpoint, start);
    while cur != endpoint {
        let next = *graph
            .neighbors(cur)
            .iter()
            .find(|&&w| block.contains(&w) && w != prev)
            .expect("cycle vertices have two neighbours");
        path.push(next);
        prev = cur;
        cur = next;
    }
    Ok(path)
}
