//! Step-by-step record of an allocator run, detailed enough to re-check the
//! intermediate inequalities with the oracle afterwards.

use std::collections::BTreeMap;

use crate::model::{AgentId, Vertex, VertexSet};

/// An agent as seen by one recursive call: possibly modified utility and the
/// share it is owed.
#[derive(Debug, Clone, PartialEq)]
pub struct Claim<S> {
    pub agent: AgentId,
    pub utility: Vec<S>,
    pub target: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionStep {
    pub region: VertexSet,
    /// Agents owed nothing; they get empty bundles.
    pub zero_target: Vec<AgentId>,
    pub peeled: Vec<(Vertex, AgentId)>,
    pub components: Vec<VertexSet>,
    /// Witness bundles of each residual agent inside each component.
    pub f: BTreeMap<(AgentId, usize), usize>,
    /// `(component index, k_j, agents served there)` in processing order.
    pub served: Vec<(usize, usize, Vec<AgentId>)>,
    pub residual: usize,
}

impl ReductionStep {
    pub fn k_sum(&self) -> usize {
        self.served.iter().map(|(_, k, _)| k).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultipartiteStep {
    pub region: VertexSet,
    pub n: usize,
    /// Parts sorted by size, ties by smallest member.
    pub parts: Vec<VertexSet>,
    pub ell: usize,
    pub v1: VertexSet,
    pub v2: VertexSet,
    pub n1: Vec<AgentId>,
    pub n2: Vec<AgentId>,
    pub carved: Vec<(AgentId, Vec<Vertex>)>,
    pub spares: Vec<(AgentId, Vertex)>,
    pub leftovers: VertexSet,
}

/// One bundle before and after a merge, with its owner's utility.
#[derive(Debug, Clone, PartialEq)]
pub struct MergedBundle {
    pub packing: usize,
    pub before: VertexSet,
    pub after: VertexSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MergeStep<S> {
    /// Types covered by this merge, as indices into the padded type list.
    pub types: std::ops::Range<usize>,
    pub level: usize,
    pub beta: S,
    pub bundles: Vec<MergedBundle>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelType<S> {
    pub utility: Vec<S>,
    pub target: S,
    pub folded: Vec<S>,
    pub packing: Vec<VertexSet>,
    pub kernel_mms: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelStep<S> {
    pub kernel: VertexSet,
    pub independent: VertexSet,
    pub anchors: BTreeMap<Vertex, Vertex>,
    pub types: Vec<KernelType<S>>,
    /// Smallest `u'_i(A'_i) / mms(K, u'_i)` of the kernel allocation.
    pub ratio: S,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Step<S> {
    Reduction(ReductionStep),
    BlockBase {
        region: VertexSet,
        agents: Vec<AgentId>,
        ratio: S,
    },
    BlockContract {
        block: VertexSet,
        cut: Vertex,
        region_after: VertexSet,
        claims: Vec<Claim<S>>,
    },
    BlockCarve {
        block: VertexSet,
        cut: Vertex,
        path: Vec<Vertex>,
        carved: Vec<(AgentId, Vec<Vertex>)>,
        region_after: VertexSet,
        remaining: Vec<Claim<S>>,
    },
    Multipartite(MultipartiteStep),
    Merge(MergeStep<S>),
    Kernel(KernelStep<S>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace<S> {
    pub steps: Vec<Step<S>>,
}

impl<S> Default for Trace<S> {
    fn default() -> Self {
        Trace { steps: Vec::new() }
    }
}

impl<S> Trace<S> {
    pub fn push(&mut self, step: Step<S>) {
        self.steps.push(step);
    }

    pub fn reductions(&self) -> impl Iterator<Item = &ReductionStep> {
        self.steps.iter().filter_map(|s| match s {
            Step::Reduction(r) => Some(r),
            _ => None,
        })
    }

    pub fn merges(&self) -> impl Iterator<Item = &MergeStep<S>> {
        self.steps.iter().filter_map(|s| match s {
            Step::Merge(m) => Some(m),
            _ => None,
        })
    }

    pub fn kernels(&self) -> impl Iterator<Item = &KernelStep<S>> {
        self.steps.iter().filter_map(|s| match s {
            Step::Kernel(k) => Some(k),
            _ => None,
        })
    }

    pub fn multipartite(&self) -> impl Iterator<Item = &MultipartiteStep> {
        self.steps.iter().filter_map(|s| match s {
            Step::Multipartite(m) => Some(m),
            _ => None,
        })
    }
}
