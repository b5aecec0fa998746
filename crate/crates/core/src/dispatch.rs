//! Picks an allocator for an instance and runs it.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graphs::{recognize, ClassWitness, GraphClass};
use crate::model::Instance;
use crate::oracle::OracleConfig;
use crate::reduction::Outcome;
use crate::scalar::Scalar;
use crate::{block_cactus, multipartite, split};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AllocClass {
    Auto,
    BlockCactus,
    Multipartite,
    Split,
}

impl AllocClass {
    pub fn name(self) -> &'static str {
        match self {
            AllocClass::Auto => "auto",
            AllocClass::BlockCactus => "block-cactus",
            AllocClass::Multipartite => "multipartite",
            AllocClass::Split => "split",
        }
    }
}

impl fmt::Display for AllocClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AllocClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(AllocClass::Auto),
            "block-cactus" => Ok(AllocClass::BlockCactus),
            "multipartite" => Ok(AllocClass::Multipartite),
            "split" => Ok(AllocClass::Split),
            other => Err(Error::InvalidInput(format!("unknown class {other:?}"))),
        }
    }
}

fn applies(w: &ClassWitness, class: AllocClass) -> bool {
    let connected = w.has(GraphClass::Connected);
    match class {
        AllocClass::Auto => false,
        AllocClass::Split => connected && w.has(GraphClass::Split),
        AllocClass::Multipartite => {
            w.has(GraphClass::CompleteMultipartite) && w.parts.as_ref().is_some_and(|p| p.len() >= 2)
        }
        AllocClass::BlockCactus => connected && w.has(GraphClass::BlockCactus),
    }
}

/// The concrete class `class` stands for on this instance. `Auto` tries
/// split, then complete multipartite, then block-cactus.
pub fn resolve<S: Scalar>(inst: &Instance<S>, class: AllocClass) -> Result<AllocClass> {
    let w = recognize(&inst.graph);
    let order = match class {
        AllocClass::Auto => vec![AllocClass::Split, AllocClass::Multipartite, AllocClass::BlockCactus],
        c => vec![c],
    };
    order.into_iter().find(|&c| applies(&w, c)).ok_or(Error::ClassMismatch {
        expected: match class {
            AllocClass::Auto => "in any supported class",
            AllocClass::BlockCactus => "a connected block-cactus graph",
            AllocClass::Multipartite => "a complete multipartite graph with two or more parts",
            AllocClass::Split => "a connected split graph",
        },
    })
}

/// The approximation factor the allocator for `class` promises here.
pub fn class_alpha<S: Scalar>(inst: &Instance<S>, class: AllocClass) -> S {
    match class {
        AllocClass::BlockCactus => block_cactus::alpha(),
        AllocClass::Multipartite => multipartite::alpha(),
        AllocClass::Split | AllocClass::Auto => split::alpha(split::level_for_types(inst.type_count())),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dispatched<S> {
    pub class: AllocClass,
    pub alpha: S,
    pub outcome: Outcome<S>,
}

pub fn allocate<S: Scalar>(inst: &Instance<S>, class: AllocClass, config: &OracleConfig) -> Result<Dispatched<S>> {
    let class = resolve(inst, class)?;
    let outcome = match class {
        AllocClass::BlockCactus => block_cactus::allocate_block_cactus(inst, config)?,
        AllocClass::Multipartite => multipartite::allocate_multipartite(inst, config)?,
        AllocClass::Split | AllocClass::Auto => split::allocate_split(inst, config)?,
    };
    Ok(Dispatched { class, alpha: class_alpha(inst, class), outcome })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::GoodsGraph;
    use crate::Value;

    fn uniform(g: GoodsGraph, n: usize) -> Instance<Value> {
        let one = Value::from_integer(1.into());
        let len = g.len();
        Instance::from_utilities(g, vec![vec![one; len]; n]).unwrap()
    }

    #[test]
    fn auto_prefers_split() {
        let star = GoodsGraph::with_indexed_vertices(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(resolve(&uniform(star, 2), AllocClass::Auto).unwrap(), AllocClass::Split);
    }

    #[test]
    fn auto_falls_back_in_order() {
        let c4 = GoodsGraph::with_indexed_vertices(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(resolve(&uniform(c4, 2), AllocClass::Auto).unwrap(), AllocClass::Multipartite);
        let c6 = GoodsGraph::with_indexed_vertices(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        assert_eq!(resolve(&uniform(c6, 2), AllocClass::Auto).unwrap(), AllocClass::BlockCactus);
    }

    #[test]
    fn explicit_class_must_fit() {
        let c6 = GoodsGraph::with_indexed_vertices(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        assert!(matches!(resolve(&uniform(c6, 2), AllocClass::Split), Err(Error::ClassMismatch { .. })));
    }

    #[test]
    fn names_round_trip() {
        for c in [AllocClass::Auto, AllocClass::BlockCactus, AllocClass::Multipartite, AllocClass::Split] {
            assert_eq!(c.name().parse::<AllocClass>().unwrap(), c);
        }
    }
}
