//! Approximate maximin-share allocation of indivisible goods that sit on the
//! vertices of a graph, where every bundle must induce a connected subgraph.
//!
//! Allocators exist for connected block-cactus graphs (1/2 of the maximin
//! share), complete multipartite graphs (1/4) and split graphs with at most
//! `2^k` agent types (`3/(7*2^k-3)`). Each one is checked against the exact
//! branch-and-bound oracle in [`oracle`].
//!
//! ```
//! use conmms::{block_cactus, oracle::OracleConfig, verify, GoodsGraph, Instance, Value};
//!
//! let g = GoodsGraph::new(["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("a", "c"), ("c", "d")]).unwrap();
//! let one = Value::from_integer(1.into());
//! let inst = Instance::from_utilities(g, vec![vec![one.clone(); 4], vec![one; 4]]).unwrap();
//! let out = block_cactus::allocate_block_cactus(&inst, &OracleConfig::default()).unwrap();
//! let cert = verify::check_allocation(&inst, &out.allocation, &Value::new(1.into(), 2.into()), &out.records);
//! assert!(cert.passes());
//! ```

pub mod audit;
pub mod block_cactus;
pub mod carve;
pub mod dispatch;
pub mod error;
pub mod generate;
pub mod graphs;
pub mod model;
pub mod multipartite;
pub mod oracle;
pub mod reduction;
pub mod scalar;
pub mod split;
pub mod trace;
pub mod verify;

mod bits;

pub use error::{Error, Result};
pub use graphs::{BlockCutTree, ClassWitness, GraphClass};
pub use model::{
    utility_of_set, validate_instance, Agent, AgentDraft, AgentId, Allocation, GoodsGraph, Instance, InstanceDraft,
    Packing, Vertex, VertexSet, Violation,
};
pub use oracle::{MmsRecord, OracleConfig, ShareKind};
pub use scalar::Scalar;

/// Exact rational with arbitrary-precision parts.
pub type Value = num_rational::BigRational;
/// Exact rational with `i64` parts; overflows on large instances.
pub type Value64 = num_rational::Ratio<i64>;
