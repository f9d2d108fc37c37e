//! Comparison methods and the exhaustive certification oracle.

mod barrier_graph;
mod greedy;
mod oracle;

pub use barrier_graph::{build_barrier_graph, build_barrier_graph_with, build_k_barrier_graph, k_disjoint_paths, BarrierGraph, GapPolicy, Node};
pub use greedy::greedy_max_coverage;
pub use oracle::{brute_force_min_kcover, ORACLE_LIMIT};
