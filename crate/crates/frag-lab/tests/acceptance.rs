//! The full verification suite at its pinned budgets — the exit gate for the
//! workspace. Every exact identity must hold outright; statistical checks run
//! at level 0.01 (or their stated tolerances) with the one-reseed allowance.
//!
//! Heavy by design: ~10⁵ tree replicas at n = 10⁶. Run it with
//! `cargo test --test acceptance -- --nocapture` to watch per-criterion
//! lines.

use frag_lab::report::{OutputFormat, RunConfig};
use frag_lab::run_acceptance_suite;

#[test]
fn full_acceptance_suite_passes() {
    let out = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance.json");
    let cfg = RunConfig {
        seed: 42,
        threads: std::thread::available_parallelism().map_or(2, |v| v.get()),
        n: 1_000_000,
        replicas: 2000,
        t_list: vec![0.5, 1.0],
        q_list: vec![1.0, 2.0],
        out: Some(out.clone()),
        format: OutputFormat::Json,
    };
    let outcome = run_acceptance_suite(&cfg).expect("suite must run to completion");
    assert!(outcome.report.pass, "acceptance suite failed; see lines above");
    let body = std::fs::read_to_string(&out).expect("report written");
    assert!(body.contains("\"schema\": \"frag-lab/1\""));
}
