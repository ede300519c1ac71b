//! Closed-form distributions and transforms for the edge-removal
//! fragmentation of random recursive trees: the Mittag-Leffler law of the
//! root-cluster weight, moments of subtree-cluster weights, the total
//! q-moment of all weights, the subtree-size laws after removing uniform
//! edges, the joint Mellin transform of the first block weights, and the
//! cumulant κ(q) = qψ(q+1) of the driving Lévy process together with its
//! Lévy–Khintchine form.
//!
//! Everything combinatorial is exact big-integer rational arithmetic;
//! everything analytic is f64 computed in log space via `ln_gamma`.

pub mod joint;
pub mod mellin;
pub mod mittag;
pub mod quad;
pub mod special;
pub mod theta;

pub use joint::{joint_mellin, mu_jt, JointMellin, JointMellinQuery};
pub use mellin::{
    c3_limit_moment, kappa, kappa_levy_khintchine, kappa_ou_integral, limit_joint_t0, mellin_x1,
    rho_moment, total_q_moment, total_q_moment_series,
};
pub use mittag::MlDensity;
pub use quad::adaptive_simpson;
pub use special::{digamma, gamma_q, ln_gamma, EULER_MASCHERONI};
pub use theta::{theta_bruteforce, theta_bruteforce_table, theta_general, theta_meir_moon, ThetaQuery};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ExactDistError {
    #[error("argument {0} outside domain {1}")]
    Domain(f64, &'static str),
    #[error("total q-moment diverges: q = {q} must exceed e^t = {et}")]
    MomentDiverges { q: f64, et: f64 },
    #[error("series did not converge within {terms} terms at x = {x}")]
    SeriesNoConvergence { x: f64, terms: usize },
    #[error("adaptive quadrature failed to reach tolerance {tol}")]
    QuadratureNoConvergence { tol: f64 },
    #[error("not a composition: parts must be >= 1 and sum to k")]
    InvalidComposition,
    #[error("enumeration too large: k = {k} exceeds cap {cap}")]
    EnumerationTooLarge { k: u64, cap: u64 },
    #[error("requested accuracy unreachable at truncation level {k_max}")]
    AccuracyUnreachable { k_max: usize },
}
