//! Seeded random instances for each supported graph class.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dispatch::AllocClass;
use crate::error::{Error, Result};
use crate::model::{Agent, GoodsGraph, Instance, Vertex};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSpec {
    pub class: AllocClass,
    pub seed: u64,
    pub vertices: usize,
    pub agents: usize,
    /// Utilities are drawn uniformly from `min_utility..=max_utility`.
    pub min_utility: u32,
    pub max_utility: u32,
    /// Number of distinct utility functions; one per agent when `None`.
    pub types: Option<usize>,
}

/// Blocks are attached one at a time to a random existing vertex; each is
/// an edge, a cycle or a clique on up to five vertices.
pub fn random_block_cactus(rng: &mut impl Rng, vertices: usize) -> Vec<(Vertex, Vertex)> {
    let mut edges = Vec::new();
    let mut count = 1;
    while count < vertices {
        let at = rng.gen_range(0..count);
        let size = rng.gen_range(2..=5.min(vertices - count + 1));
        let block: Vec<Vertex> = std::iter::once(at).chain(count..count + size - 1).collect();
        count += size - 1;
        if size > 3 && rng.gen_bool(0.5) {
            edges.extend((0..size).map(|i| (block[i], block[(i + 1) % size])));
        } else {
            for i in 0..size {
                edges.extend((i + 1..size).map(|j| (block[i], block[j])));
            }
        }
    }
    edges
}

/// Between two and `max_parts` nonempty parts over shuffled vertices.
pub fn random_multipartite(rng: &mut impl Rng, vertices: usize, max_parts: usize) -> Vec<(Vertex, Vertex)> {
    let parts = rng.gen_range(2..=max_parts.clamp(2, vertices.max(2)));
    let mut order: Vec<Vertex> = (0..vertices).collect();
    order.shuffle(rng);
    let part_of: Vec<usize> = (0..vertices).map(|i| if i < parts { i } else { rng.gen_range(0..parts) }).collect();
    let mut label = vec![0; vertices];
    for (i, &v) in order.iter().enumerate() {
        label[v] = part_of[i];
    }
    let mut edges = Vec::new();
    for a in 0..vertices {
        edges.extend((a + 1..vertices).filter(|&b| label[a] != label[b]).map(|b| (a, b)));
    }
    edges
}

/// A random clique with every other vertex joined to a random nonempty
/// subset of it.
pub fn random_split(rng: &mut impl Rng, vertices: usize) -> Vec<(Vertex, Vertex)> {
    let mut order: Vec<Vertex> = (0..vertices).collect();
    order.shuffle(rng);
    let k = rng.gen_range(1..=vertices);
    let (clique, rest) = order.split_at(k);
    let mut edges = Vec::new();
    for (i, &a) in clique.iter().enumerate() {
        edges.extend(clique[i + 1..].iter().map(|&b| (a.min(b), a.max(b))));
    }
    for &v in rest {
        let first = rng.gen_range(0..k);
        for (j, &w) in clique.iter().enumerate() {
            if j == first || rng.gen_bool(0.3) {
                edges.push((v.min(w), v.max(w)));
            }
        }
    }
    edges.sort_unstable();
    edges
}

pub fn random_utilities<S: Scalar>(rng: &mut impl Rng, vertices: usize, min: u32, max: u32) -> Vec<S> {
    (0..vertices).map(|_| S::from_count(rng.gen_range(min..=max) as usize)).collect()
}

pub fn generate<S: Scalar>(spec: &GenSpec) -> Result<Instance<S>> {
    if spec.vertices == 0 || spec.agents == 0 {
        return Err(Error::InvalidInput("need at least one vertex and one agent".into()));
    }
    if spec.min_utility > spec.max_utility {
        return Err(Error::InvalidInput("utility range is empty".into()));
    }
    let types = spec.types.unwrap_or(spec.agents);
    if types == 0 || types > spec.agents {
        return Err(Error::InvalidInput(format!("{types} types for {} agents", spec.agents)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let edges = match spec.class {
        AllocClass::BlockCactus => random_block_cactus(&mut rng, spec.vertices),
        AllocClass::Multipartite => {
            if spec.vertices < 2 {
                return Err(Error::InvalidInput("a complete multipartite graph needs two vertices".into()));
            }
            random_multipartite(&mut rng, spec.vertices, 4)
        }
        AllocClass::Split => random_split(&mut rng, spec.vertices),
        AllocClass::Auto => return Err(Error::InvalidInput("the generator needs a concrete class".into())),
    };
    let graph = GoodsGraph::with_indexed_vertices(spec.vertices, &edges)?;
    let pool: Vec<Vec<S>> =
        (0..types).map(|_| random_utilities(&mut rng, spec.vertices, spec.min_utility, spec.max_utility)).collect();
    let agents = (0..spec.agents)
        .map(|i| {
            let t = if i < types { i } else { rng.gen_range(0..types) };
            Agent { id: i + 1, type_id: t, utility: pool[t].clone() }
        })
        .collect();
    Instance::new(graph, agents)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{block_cut_tree, is_clique, is_cycle, recognize, GraphClass};
    use crate::Value;

    fn spec(class: AllocClass, seed: u64) -> GenSpec {
        GenSpec { class, seed, vertices: 12, agents: 3, min_utility: 0, max_utility: 20, types: None }
    }

    #[test]
    fn same_seed_same_instance() {
        for class in [AllocClass::BlockCactus, AllocClass::Multipartite, AllocClass::Split] {
            let a: Instance<Value> = generate(&spec(class, 1)).unwrap();
            let b: Instance<Value> = generate(&spec(class, 1)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn generated_graphs_have_their_class() {
        for seed in 0..40 {
            let g = generate::<Value>(&spec(AllocClass::BlockCactus, seed)).unwrap().graph;
            let w = recognize(&g);
            assert!(w.has(GraphClass::Connected) && w.has(GraphClass::BlockCactus));
            let tree = block_cut_tree(&g).unwrap();
            assert!(tree.blocks.iter().all(|b| is_clique(&g, b) || is_cycle(&g, b)));

            let g = generate::<Value>(&spec(AllocClass::Multipartite, seed)).unwrap().graph;
            let w = recognize(&g);
            assert!(w.has(GraphClass::CompleteMultipartite));
            assert!((2..=4).contains(&w.parts.as_ref().unwrap().len()));

            let g = generate::<Value>(&spec(AllocClass::Split, seed)).unwrap().graph;
            let w = recognize(&g);
            assert!(w.has(GraphClass::Connected) && w.has(GraphClass::Split));
        }
    }

    #[test]
    fn type_count_is_respected() {
        let mut s = spec(AllocClass::Split, 7);
        s.agents = 4;
        s.types = Some(2);
        let inst: Instance<Value> = generate(&s).unwrap();
        assert!(inst.type_count() <= 2);
        s.types = Some(5);
        assert!(generate::<Value>(&s).is_err());
    }
}
