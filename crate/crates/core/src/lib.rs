//! Ranked path weights between two vertices of a weighted directed multigraph.
//!
//! List the weights of all paths from `v1` to `v2` in increasing order,
//! `p_1 <= p_2 <= ...`. Depending on the strongly connected components met by
//! those paths the sequence is finite, grows like a root of the rank
//! (`p_r^c / r -> s`), or grows logarithmically (`p_r / log r -> s`).
//! [`asymptotics::classify`] computes the case and the constant; the
//! [`enumeration`] module lists paths in weight order to check it empirically.

pub mod asymptotics;
pub mod cli;
pub mod enumeration;
pub mod error;
pub mod graph;
pub mod markov;
pub mod structure;

pub use error::{Error, Result};
pub use graph::{parse_graph, path_weight, EdgeId, Path, VertexId, WeightedDigraph};
