//! Verification harness for the fragmentation laboratory: Monte Carlo moment
//! estimation with z-scores against closed forms, Kolmogorov-Smirnov and
//! chi-square goodness-of-fit machinery, the full acceptance suite, and
//! machine-readable reports.
//!
//! Determinism contract: every replica draws from a ChaCha substream keyed by
//! (master seed, test tag, replica index). Parallel batches collect
//! per-replica values in replica order and reduce sequentially, so reports
//! are identical for any thread count.

pub mod acceptance;
pub mod checks;
pub mod moments;
pub mod parallel;
pub mod report;
pub mod stats;

pub use acceptance::{run_acceptance_suite, AcceptanceOutcome};
pub use moments::{mc_moment, MomentTarget};
pub use report::{MomentReport, OutputFormat, Report, RunConfig, TestVerdict};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("sample is empty or degenerate")]
    DegenerateSample,
    #[error("expected cell count below 5; increase replicas")]
    SparseCells,
    #[error("configuration: {0}")]
    Config(String),
    #[error("simulation: {0}")]
    Sim(#[from] rrt_sim::RrtSimError),
    #[error("ou simulation: {0}")]
    Ou(#[from] ou_sim::OuSimError),
    #[error("exact computation: {0}")]
    Exact(#[from] exact_dist::ExactDistError),
    #[error("rates: {0}")]
    Rates(#[from] urn_rates::UrnRatesError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),
}

/// Significance level shared by every statistical verdict in the suite.
pub const ALPHA: f64 = 0.01;
