//! The acceptance suite: every verification criterion of the laboratory, run
//! at pinned tolerances, one pass/fail line per criterion component.
//!
//! Exact (rational or deterministic-numeric) checks allow zero failures.
//! Statistical checks run at level α = 0.01 with a suite-level allowance: at
//! most one may fail per run, and it must pass when rerun on a derived
//! reseed. Budgets are sized so every tolerance sits ≥ 3.5σ from its Monte
//! Carlo noise floor.

use std::time::Instant;

use exact_dist::{
    c3_limit_moment, joint_mellin, kappa, kappa_levy_khintchine, kappa_ou_integral, ln_gamma,
    mellin_x1, rho_moment, theta_bruteforce_table, theta_general, theta_meir_moon,
    total_q_moment, total_q_moment_series, JointMellinQuery, ThetaQuery,
};
use num_traits::{One, Zero};
use urn_rates::{freq_integral_truncated, RateTable};

use crate::checks::{
    first_jump_checks, jump_count_report, largest_block_probability, ml_law_checks,
    ou_mgf_check, ou_tree_ks, ranked_composition_ks, semigroup_product_ks,
};
use crate::moments::{mc_moment, MomentTarget};
use crate::parallel::tag;
use crate::report::{MomentReport, Report, RunConfig, TestVerdict};
use crate::HarnessError;

const LN2: f64 = std::f64::consts::LN_2;

// Replica budgets. The statistical criteria fix their tolerances; these
// counts keep every tolerance at ≥ 3.5 standard errors.
const ML_MOMENT_REPLICAS: u64 = 30_000;
const ML_LAW_REPLICAS: u64 = 2_000;
const MEAN_INTENSITY_REPLICAS: u64 = 9_000;
const OU_MGF_PATHS: u64 = 100_000;
const OU_KS_TREE_REPLICAS: u64 = 2_000;
const OU_KS_PATHS: u64 = 2_000;
const JUMP_REPLICAS: u64 = 10_000;
const FIRST_JUMP_REPLICAS: u64 = 100_000;
const SEMIGROUP_REPLICAS: u64 = 2_000;
const COMPOSITION_REPLICAS: u64 = 2_000;
const JOINT_MC_REPLICAS: u64 = 20_000;
const LARGEST_REPLICAS: u64 = 4_000;

const RESEED_XOR: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Default)]
struct BundleResult {
    verdicts: Vec<TestVerdict>,
    moments: Vec<MomentReport>,
}

impl BundleResult {
    fn verdict(v: TestVerdict) -> Self {
        BundleResult {
            verdicts: vec![v],
            moments: Vec::new(),
        }
    }
}

pub struct AcceptanceOutcome {
    pub report: Report,
}

/// Runs the full suite. Prints one line per verdict as bundles complete;
/// writes the report to `cfg.out` when set. The returned report's `pass`
/// reflects the suite rule (exact: zero failures; statistical: at most one,
/// which must pass on reseed).
pub fn run_acceptance_suite(cfg: &RunConfig) -> Result<AcceptanceOutcome, HarnessError> {
    if cfg.replicas == 0 {
        return Err(HarnessError::Config(
            "acceptance requires a positive replica budget".into(),
        ));
    }
    let mut report = Report::new(cfg.seed);

    // ---- exact criteria -------------------------------------------------
    for bundle in exact_bundles(cfg) {
        let started = Instant::now();
        let mut result = (bundle.run)(cfg.seed)?;
        let elapsed = started.elapsed().as_secs_f64();
        for v in &mut result.verdicts {
            v.runtime = elapsed;
            println!("{v}");
        }
        report.verdicts.extend(result.verdicts);
        report.moments.extend(result.moments);
    }

    // ---- statistical criteria -------------------------------------------
    let bundles = statistical_bundles(cfg);
    let mut bundle_of_verdict: Vec<usize> = Vec::new();
    let mut stat_verdicts: Vec<TestVerdict> = Vec::new();
    for (idx, bundle) in bundles.iter().enumerate() {
        let started = Instant::now();
        let mut result = (bundle.run)(cfg.seed)?;
        let elapsed = started.elapsed().as_secs_f64();
        for v in &mut result.verdicts {
            v.runtime = elapsed;
            println!("{v}");
            bundle_of_verdict.push(idx);
        }
        stat_verdicts.extend(result.verdicts);
        report.moments.extend(result.moments);
    }

    let exact_ok = report.verdicts.iter().all(|v| v.pass);
    let failing: Vec<usize> = stat_verdicts
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.pass)
        .map(|(i, _)| i)
        .collect();

    let mut overall = exact_ok;
    match failing.len() {
        0 => {}
        1 => {
            // one statistical failure is allowed, but it must pass on reseed
            let bidx = bundle_of_verdict[failing[0]];
            let reseed = cfg.seed ^ RESEED_XOR;
            println!(
                "-- one statistical failure ({}); rerunning bundle '{}' on reseed {:#x}",
                stat_verdicts[failing[0]].name, bundles[bidx].name, reseed
            );
            let started = Instant::now();
            let mut rerun = (bundles[bidx].run)(reseed)?;
            let elapsed = started.elapsed().as_secs_f64();
            for v in &mut rerun.verdicts {
                v.name = format!("{}#reseed", v.name);
                v.runtime = elapsed;
                println!("{v}");
                overall &= v.pass;
            }
            stat_verdicts.extend(rerun.verdicts);
            report.moments.extend(rerun.moments);
        }
        _ => overall = false,
    }

    report.verdicts.extend(stat_verdicts);
    report.pass = overall;
    println!(
        "acceptance: {} ({} verdicts, seed {})",
        if overall { "PASS" } else { "FAIL" },
        report.verdicts.len(),
        cfg.seed
    );

    if let Some(path) = &cfg.out {
        report.write(path, cfg.format)?;
    }
    Ok(AcceptanceOutcome { report })
}

struct Bundle<'a> {
    name: &'static str,
    run: Box<dyn Fn(u64) -> Result<BundleResult, HarnessError> + 'a>,
}

fn exact_bundles(cfg: &RunConfig) -> Vec<Bundle<'_>> {
    let _ = cfg;
    vec![
        Bundle {
            name: "rates_exact",
            run: Box::new(|_| criterion1_rates()),
        },
        Bundle {
            name: "theta_oracle",
            run: Box::new(|_| criterion2_theta()),
        },
        Bundle {
            name: "mean_intensity_series",
            run: Box::new(|_| criterion5_series()),
        },
        Bundle {
            name: "cumulant_identities",
            run: Box::new(|_| criterion7_cumulant()),
        },
        Bundle {
            name: "semigroup_factorization",
            run: Box::new(|_| criterion10_factorization()),
        },
        Bundle {
            name: "joint_mellin_consistency",
            run: Box::new(|_| criterion11_exact()),
        },
        Bundle {
            name: "asymptotic_limits",
            run: Box::new(|_| criterion12_exact()),
        },
        Bundle {
            name: "divergence_demo",
            run: Box::new(|_| criterion13_divergence()),
        },
    ]
}

fn statistical_bundles(cfg: &RunConfig) -> Vec<Bundle<'_>> {
    let n = cfg.n;
    let threads = cfg.threads;
    vec![
        Bundle {
            name: "ml_moments",
            run: Box::new(move |seed| {
                let reports = mc_moment(
                    seed,
                    threads,
                    tag::ML_MOMENTS,
                    n,
                    ML_MOMENT_REPLICAS,
                    &[0.5, LN2],
                    &[1.0, 2.0],
                    MomentTarget::MellinX1,
                )?;
                let mut out = BundleResult::default();
                for r in reports {
                    let rel = r.rel_err();
                    out.verdicts.push(TestVerdict::tolerance(
                        &format!("ml_moments.rel3pct_t{}_q{}", r.t, r.q),
                        rel,
                        rel <= 0.03,
                    ));
                    out.moments.push(r);
                }
                Ok(out)
            }),
        },
        Bundle {
            name: "ml_law",
            run: Box::new(move |seed| {
                Ok(BundleResult {
                    verdicts: ml_law_checks(seed, threads, n, ML_LAW_REPLICAS, 0.5)?,
                    moments: Vec::new(),
                })
            }),
        },
        Bundle {
            name: "mean_intensity_mc",
            run: Box::new(move |seed| {
                let reports = mc_moment(
                    seed,
                    threads,
                    tag::MEAN_INTENSITY,
                    n,
                    MEAN_INTENSITY_REPLICAS,
                    &[LN2],
                    &[3.0],
                    MomentTarget::Total,
                )?;
                let mut out = BundleResult::default();
                for r in reports {
                    let rel = r.rel_err();
                    out.verdicts.push(TestVerdict::tolerance(
                        "mean_intensity.mc_rel5pct_q3_tln2",
                        rel,
                        rel <= 0.05,
                    ));
                    out.moments.push(r);
                }
                Ok(out)
            }),
        },
        Bundle {
            name: "ou_cross",
            run: Box::new(move |seed| {
                let (verdict, mgf_report) =
                    ou_mgf_check(seed, threads, 1e-3, OU_MGF_PATHS, 1.0, 1.0, 0.02)?;
                let mut verdicts = vec![verdict];
                verdicts.extend(ou_tree_ks(
                    seed,
                    threads,
                    n,
                    OU_KS_TREE_REPLICAS,
                    1e-3,
                    OU_KS_PATHS,
                    &[0.5, 1.0],
                )?);
                Ok(BundleResult {
                    verdicts,
                    moments: vec![mgf_report],
                })
            }),
        },
        Bundle {
            name: "jump_stats",
            run: Box::new(move |seed| {
                let report = jump_count_report(seed, threads, n, JUMP_REPLICAS, 1.0, 0.5);
                let rel = report.rel_err();
                Ok(BundleResult {
                    verdicts: vec![TestVerdict::tolerance(
                        "jump_stats.mean_count_rel5pct",
                        rel,
                        rel <= 0.05,
                    )],
                    moments: vec![report],
                })
            }),
        },
        Bundle {
            name: "first_jump",
            run: Box::new(move |seed| {
                let mut verdicts = Vec::new();
                for level in [3u32, 4, 5] {
                    verdicts.extend(first_jump_checks(
                        seed,
                        threads,
                        level,
                        FIRST_JUMP_REPLICAS,
                    )?);
                }
                Ok(BundleResult {
                    verdicts,
                    moments: Vec::new(),
                })
            }),
        },
        Bundle {
            name: "semigroup_routes",
            run: Box::new(move |seed| {
                let mut verdicts = vec![semigroup_product_ks(
                    seed,
                    threads,
                    n,
                    SEMIGROUP_REPLICAS,
                    0.5,
                    0.5,
                )?];
                verdicts.push(ranked_composition_ks(
                    seed,
                    threads,
                    n,
                    COMPOSITION_REPLICAS,
                    0.4,
                    0.4,
                )?);
                Ok(BundleResult {
                    verdicts,
                    moments: Vec::new(),
                })
            }),
        },
        Bundle {
            name: "joint_mellin_mc",
            run: Box::new(move |seed| {
                let reports = mc_moment(
                    seed,
                    threads,
                    tag::JOINT_MC,
                    n,
                    JOINT_MC_REPLICAS,
                    &[0.7],
                    &[1.0],
                    MomentTarget::JointX1X2 { q2: 2.0, k_max: 400 },
                )?;
                let mut out = BundleResult::default();
                for r in reports {
                    let rel = r.rel_err();
                    out.verdicts.push(TestVerdict::tolerance(
                        "joint_mellin.mc_rel5pct_t0.7",
                        rel,
                        rel <= 0.05,
                    ));
                    out.moments.push(r);
                }
                Ok(out)
            }),
        },
        Bundle {
            name: "largest_block",
            run: Box::new(move |seed| {
                let mut reports = Vec::new();
                for (idx, &t) in [0.2, 0.1, 0.05].iter().enumerate() {
                    reports.push(largest_block_probability(
                        seed,
                        threads,
                        n,
                        LARGEST_REPLICAS,
                        t,
                        idx as u16,
                    ));
                }
                let (p20, p10, p05) = (
                    (reports[0].estimate, reports[0].stderr),
                    (reports[1].estimate, reports[1].stderr),
                    (reports[2].estimate, reports[2].stderr),
                );
                let floor = TestVerdict::tolerance(
                    "largest_block.geq_0.95_at_t0.05",
                    p05.0,
                    p05.0 >= 0.95,
                );
                // trend toward 1 as t ↓: strict separation between the ends,
                // monotone within noise in between
                let trend_ok = p05.0 - p20.0 > 2.0 * (p05.1 + p20.1)
                    && p05.0 >= p10.0 - 2.0 * (p05.1 + p10.1)
                    && p10.0 >= p20.0 - 2.0 * (p10.1 + p20.1);
                let trend = TestVerdict::tolerance(
                    "largest_block.trend_t0.2_0.1_0.05",
                    p05.0 - p20.0,
                    trend_ok,
                );
                Ok(BundleResult {
                    verdicts: vec![floor, trend],
                    moments: reports,
                })
            }),
        },
    ]
}

// ---- criterion 1: exact rate identities --------------------------------

fn criterion1_rates() -> Result<BundleResult, HarnessError> {
    let mut totals_ok = true;
    let mut masses_ok = true;
    for n in 2..=10u32 {
        let table = RateTable::build(n)?;
        totals_ok &= table.total() == num_rational_from(n as i64 - 1);
        for k in 2..=n {
            let mass: num_rational::BigRational = table
                .entries
                .iter()
                .filter(|e| e.pi2[0] == k)
                .map(|e| e.rate())
                .sum();
            masses_ok &= mass.is_one();
        }
    }
    Ok(BundleResult {
        verdicts: vec![
            TestVerdict::exact("rates.total_n_minus_1_n2_10", 0.0, totals_ok),
            TestVerdict::exact("rates.per_k_urn_mass_1", 0.0, masses_ok),
        ],
        moments: Vec::new(),
    })
}

fn num_rational_from(v: i64) -> num_rational::BigRational {
    num_rational::BigRational::from_integer(v.into())
}

// ---- criterion 2: θ oracle equivalence ----------------------------------

fn criterion2_theta() -> Result<BundleResult, HarnessError> {
    let mut mismatches = 0u64;
    let mut checked = 0u64;
    for j in 1..=4usize {
        for k in (j as u64)..=8 {
            let brute = theta_bruteforce_table(j, k)?;
            for ks in exact_dist::theta::compositions(k, j) {
                let q = ThetaQuery::new(j, k, ks.clone())?;
                let want = brute
                    .get(&ks)
                    .cloned()
                    .unwrap_or_else(num_rational::BigRational::zero);
                if theta_general(&q)? != want {
                    mismatches += 1;
                }
                if j == 2 && theta_meir_moon(k, ks[0], ks[1])? != want {
                    mismatches += 1;
                }
                checked += 1;
            }
        }
    }
    Ok(BundleResult::verdict(TestVerdict::exact(
        &format!("theta.oracle_equivalence_{checked}_compositions"),
        mismatches as f64,
        mismatches == 0,
    )))
}

// ---- criterion 5 (exact half): series route of the mean intensity -------

fn criterion5_series() -> Result<BundleResult, HarnessError> {
    let mut worst = 0.0f64;
    for &(q, t) in &[(3.0, LN2), (4.0, 1.0)] {
        let closed = total_q_moment(q, t)?;
        let series = total_q_moment_series(q, t, 20_000)?;
        worst = worst.max((closed - series).abs());
    }
    Ok(BundleResult::verdict(TestVerdict::exact(
        "mean_intensity.series_vs_closed_1e-8",
        worst,
        worst <= 1e-8,
    )))
}

// ---- criterion 7: cumulant identities ------------------------------------

fn criterion7_cumulant() -> Result<BundleResult, HarnessError> {
    let mut worst_lk = 0.0f64;
    for &q in &[0.5, 1.0, 2.0, 5.0] {
        worst_lk = worst_lk.max((kappa_levy_khintchine(q)? - kappa(q)).abs());
    }
    let mut worst_ou = 0.0f64;
    for &q in &[0.5, 1.0, 2.0, 5.0] {
        for &t in &[0.5, 1.0, 2.0] {
            let lhs = kappa_ou_integral(q, t, 1e-11)?;
            worst_ou = worst_ou.max((lhs - mellin_x1(q, t).ln()).abs());
        }
    }
    Ok(BundleResult {
        verdicts: vec![
            TestVerdict::exact("cumulant.levy_khintchine_1e-6", worst_lk, worst_lk <= 1e-6),
            TestVerdict::exact("cumulant.ou_integral_1e-8", worst_ou, worst_ou <= 1e-8),
        ],
        moments: Vec::new(),
    })
}

// ---- criterion 10 (exact half): Mellin factorization ---------------------

fn criterion10_factorization() -> Result<BundleResult, HarnessError> {
    let mut worst = 0.0f64;
    for &q in &[0.5, 1.0, 2.0, 4.0] {
        for &s in &[0.3, 0.7, 1.2] {
            for &t in &[0.3, 0.7, 1.2] {
                let lhs = mellin_x1(q, s + t);
                let rhs = mellin_x1(q * (-t as f64).exp(), s) * mellin_x1(q, t);
                worst = worst.max((lhs - rhs).abs() / lhs.max(1.0));
            }
        }
    }
    Ok(BundleResult::verdict(TestVerdict::exact(
        "semigroup.mellin_factorization_1e-12",
        worst,
        worst <= 1e-12,
    )))
}

// ---- criterion 11 (exact half): joint Mellin marginal ---------------------

fn criterion11_exact() -> Result<BundleResult, HarnessError> {
    let jm = joint_mellin(&JointMellinQuery {
        j: 1,
        t: LN2,
        qs: vec![2.0, 0.0],
        k_max: 400,
    })?;
    let diff = (jm.value - mellin_x1(2.0, LN2)).abs();
    Ok(BundleResult::verdict(TestVerdict::exact(
        "joint_mellin.j1_marginal_1e-6",
        diff + jm.tail_bound,
        diff <= 1e-6 && jm.tail_bound <= 1e-6,
    )))
}

// ---- criterion 12 (exact half): analytic limits ---------------------------

fn criterion12_exact() -> Result<BundleResult, HarnessError> {
    // late-block limit consistency: n^{e^{−t}q}·E[ρ_i^q] at i = n/(1−e^{−t})
    // approaches the limit moment, within 1% at n = 10⁶.
    let mut worst_c3 = 0.0f64;
    for &(q, t) in &[(1.0, 0.5), (2.0, 1.0)] {
        let nf = 1e6f64;
        let p = (-t as f64).exp();
        let i = (nf / (1.0 - p)).round() as u64;
        let finite = nf.powf(p * q) * rho_moment(q, t, i);
        let limit = c3_limit_moment(q, t);
        worst_c3 = worst_c3.max(((finite - limit) / limit).abs());
    }
    // large-time limit: E[X₁(t)^q] → Γ(q+1), gap shrinking along t = 10, 20, 30.
    let mut c2_ok = true;
    let mut worst_gap = 0.0f64;
    for &q in &[1.0, 2.0, 4.0] {
        let target = ln_gamma(q + 1.0).exp();
        let gaps: Vec<f64> = [10.0, 20.0, 30.0]
            .iter()
            .map(|&t| ((mellin_x1(q, t) - target) / target).abs())
            .collect();
        c2_ok &= gaps[0] >= gaps[1] && gaps[1] >= gaps[2] && gaps[2] <= 1e-9;
        worst_gap = worst_gap.max(gaps[2]);
    }
    Ok(BundleResult {
        verdicts: vec![
            TestVerdict::exact("late_block.rescaled_limit_1pct", worst_c3, worst_c3 <= 0.01),
            TestVerdict::exact("large_t.mellin_to_gamma", worst_gap, c2_ok),
        ],
        moments: Vec::new(),
    })
}

// ---- criterion 13: failure of the integrability condition ----------------

fn criterion13_divergence() -> Result<BundleResult, HarnessError> {
    let mut worst = 0.0f64;
    let mut prev = 0.0f64;
    let mut growing = true;
    for &delta in &[1e-2, 1e-4, 1e-6] {
        let v = freq_integral_truncated(|a, _| 1.0 - a, delta)?;
        let want = (1.0f64 / delta).ln();
        worst = worst.max((v - want).abs());
        growing &= v > prev + 4.0;
        prev = v;
    }
    Ok(BundleResult::verdict(TestVerdict::exact(
        "divergence.truncated_integral_ln_growth",
        worst,
        worst <= 1e-6 && growing,
    )))
}
