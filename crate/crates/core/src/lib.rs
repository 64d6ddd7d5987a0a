//! Bandit policies, regret bounds and simulators for joint channel and rate
//! selection on a wireless link.

pub mod bounds;
pub mod env;
pub mod graph;
pub mod harness;
pub mod io;
pub mod kl;
pub mod model;
pub mod policy;
pub mod stats;

pub use graph::{build_graph, NeighborhoodGraph};
pub use model::{DecisionPair, LinkModel, OptimaSummary, PairMatrix, RateSet};
pub use policy::{make_policy, make_windowed, IndexKind, IndexPolicy, Policy};
