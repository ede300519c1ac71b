//! Simulation substrate for the fragmentation of random recursive trees.
//!
//! A tree on {1,…,n} is grown by attaching each vertex i ≥ 2 to a uniform
//! parent among {1,…,i−1}; the edge above i is removed at an independent
//! Exp(1) time ε_i. The connected clusters at time t are the blocks of the
//! restricted partition Π(t)|[n] (equivalently, Bernoulli bond percolation
//! with keep probability e^{−t}), and the normalized weight of a cluster of
//! size s is s·n^{−e^{−t}}.
//!
//! Everything is O(n) per sample and array-based: one ascending pass assigns
//! cluster labels in least-element order, a min-over-path pass yields the
//! whole root-cluster trajectory from one realization, and reverse-time
//! union-find recovers the root cluster's jump history. `stream` holds the
//! fused generate-and-measure estimators the verification harness batches
//! over; they draw from the same per-vertex laws without materializing the
//! tree.

mod cluster;
mod clocks;
mod jumps;
pub mod stream;
mod tree;
mod unionfind;

pub use clocks::{gen_clocks, EdgeClocks};
pub use cluster::{
    clusters_at, snapshot_partition, sorted_weights, subtree_cluster_weight, weights_at,
    ClusterSnapshot, WeightEstimate,
};
pub use jumps::{
    JumpScratch,
    first_jump, gen_tree_and_clocks, root_jump_magnitudes, root_jump_magnitudes_with,
    root_sizes_on_grid, root_weight_path,
    JumpRecord,
};
pub use tree::{gen_tree, subtree_size, RecursiveTree};
pub use unionfind::UnionFind;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RrtSimError {
    #[error("need at least {need} vertices, got {got}")]
    TooFewVertices { need: u32, got: u32 },
    #[error("time grid must be sorted ascending and nonnegative")]
    UnsortedGrid,
    #[error("vertex {v} out of range 1..={n}")]
    VertexOutOfRange { v: u32, n: u32 },
}

/// n^{−e^{−t}}·size, the finite-n estimator of a block weight. Computed as a
/// division so that t = 0 gives exactly size/n (and exactly 1.0 for the full
/// cluster).
pub fn normalized_weight(n: u64, t: f64, size: u64) -> f64 {
    size as f64 / (n as f64).powf((-t).exp())
}
