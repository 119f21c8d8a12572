//! Reproducible, partitionable random graph generators.
//!
//! Every generator draws from an [`RngStream`] keyed by a 64-bit seed.
//! Partitioned generators split their work into a parameter-dependent chunk
//! plan, so the same seed yields the same edge list for any thread count.

pub mod error;
pub mod gen;
pub mod graph;
pub mod parallel;
pub mod random;
pub mod sampling;
pub mod stats;
pub mod transform;
pub mod verify;

pub use error::{GraphError, Result};
pub use graph::{AdjacencyGraph, DegreeSequence, Edge, Graph, Node, WeightedGraph};
pub use parallel::{Partition, PartitionedModel};
pub use random::RngStream;
