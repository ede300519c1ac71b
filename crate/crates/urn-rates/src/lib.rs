//! The splitting-rate measure **r** = Σ_{k≥2} p_k of the recursive-tree
//! fragmentation, restricted to [n]:
//!
//! - p_k is the law of the binary partition grown by a Pólya urn that starts
//!   with k−1 black balls labeled 1,…,k−1 and one red ball labeled k, each
//!   later ball copying the color of a uniformly drawn ball;
//! - the jump rate of the restricted chain into a binary partition π of [n]
//!   is exactly p_k({η : η|[n] = π}) with k = min π₂, and zero for partitions
//!   with three or more blocks;
//! - the total rate out of the unbroken state is n−1.
//!
//! Rates are exact rationals. The asymptotic-frequency side of the same
//! measure (density x^{−2} on the second block's frequency, with tail
//! Λ((−∞,−y]) = 1/(e^y−1) after the log map) is provided as f64 quadrature.

mod freq;
mod table;
mod urn;

pub use freq::{freq_integral, freq_integral_truncated, lambda_tail};
pub use table::{RateEntry, RateTable};
pub use urn::{pk_prob, rate, sample_pk, UrnPartition};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum UrnRatesError {
    #[error("red label k = {k} out of range 2..={n}")]
    LabelOutOfRange { k: u32, n: u32 },
    #[error("partition is not binary: {blocks} blocks")]
    NotBinary { blocks: usize },
    #[error("the neutral partition carries no jump rate")]
    NeutralPartition,
    #[error("restriction level {n} outside supported range {lo}..={hi}")]
    LevelOutOfRange { n: u32, lo: u32, hi: u32 },
    #[error("integral did not stabilize: truncations keep growing (last {last})")]
    Divergent { last: f64 },
    #[error("quadrature failure: {0}")]
    Quadrature(#[from] exact_dist::ExactDistError),
}
