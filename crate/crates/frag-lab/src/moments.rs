//! Monte Carlo moment estimation against the closed forms. One tree
//! realization serves a whole (t, q) grid: the root-cluster trajectory is
//! computed once per replica and every requested moment is read off it.

use exact_dist::{c3_limit_moment, joint_mellin, mellin_x1, rho_moment, total_q_moment,
    JointMellinQuery};
use rrt_sim::stream::StreamBuf;
use rrt_sim::{gen_clocks, gen_tree, normalized_weight, subtree_cluster_weight};

use crate::parallel::{replica_map, substream};
use crate::report::MomentReport;
use crate::HarnessError;

/// Which closed form a Monte Carlo mean is checked against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MomentTarget {
    /// E[X̂₁(t)^q] vs Γ(q+1)/Γ(e^{−t}q+1).
    MellinX1,
    /// E[ρ̂ᵢ(t)^q] vs Γ(q+1)Γ(i)/Γ(e^{−t}q+i), the subtree-cluster moment.
    Rho { i: u64 },
    /// E[Σᵢ X̂ᵢ(t)^q] vs (q−1)/(e^{−t}q−1)·Γ(q)/Γ(e^{−t}q), q > e^t.
    Total,
    /// E[X̂₁(t)^q·X̂₂(t)^{q₂}] vs the truncated joint-Mellin series.
    JointX1X2 { q2: f64, k_max: usize },
    /// E[(j^{e^{−t}}X̂_j(t))^q] vs (1−e^{−t})^{e^{−t}q}Γ(q+1) for a late
    /// block index j.
    C3Limit { block: u64 },
}

impl MomentTarget {
    fn label(&self, t: f64, q: f64) -> String {
        match self {
            MomentTarget::MellinX1 => format!("E[X1(t)^q] t={t} q={q}"),
            MomentTarget::Rho { i } => format!("E[rho_{i}(t)^q] t={t} q={q}"),
            MomentTarget::Total => format!("E[sum X_i(t)^q] t={t} q={q}"),
            MomentTarget::JointX1X2 { q2, .. } => {
                format!("E[X1(t)^q X2(t)^{q2}] t={t} q={q}")
            }
            MomentTarget::C3Limit { block } => {
                format!("E[(j^p X_j(t))^q] j={block} t={t} q={q}")
            }
        }
    }

    fn exact(&self, t: f64, q: f64) -> Result<f64, HarnessError> {
        Ok(match self {
            MomentTarget::MellinX1 => mellin_x1(q, t),
            MomentTarget::Rho { i } => rho_moment(q, t, *i),
            MomentTarget::Total => total_q_moment(q, t)?,
            MomentTarget::JointX1X2 { q2, k_max } => {
                joint_mellin(&JointMellinQuery {
                    j: 1,
                    t,
                    qs: vec![q, *q2],
                    k_max: *k_max,
                })?
                .value
            }
            MomentTarget::C3Limit { .. } => c3_limit_moment(q, t),
        })
    }
}

/// Sample mean and standard error of a replica column.
pub fn summarize(values: &[f64]) -> (f64, f64) {
    let r = values.len() as f64;
    let mean = values.iter().sum::<f64>() / r;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (r * (r - 1.0))).sqrt())
}

pub fn build_report(
    label: String,
    values: &[f64],
    exact: f64,
    n: u64,
    t: f64,
    q: f64,
) -> MomentReport {
    let (estimate, stderr) = summarize(values);
    let z = if stderr > 0.0 {
        (estimate - exact) / stderr
    } else if estimate == exact {
        0.0
    } else {
        f64::INFINITY
    };
    MomentReport {
        label,
        estimate,
        stderr,
        exact,
        z,
        n,
        replicas: values.len() as u64,
        t,
        q,
    }
}

/// Runs one batch of replicas and reports every (t, q) combination of the
/// grid against the target's exact value. All combinations share the same
/// replicas: the grid is coupled through one realization per replica.
pub fn mc_moment(
    seed: u64,
    threads: usize,
    stream_tag: u16,
    n: u64,
    replicas: u64,
    t_list: &[f64],
    q_list: &[f64],
    target: MomentTarget,
) -> Result<Vec<MomentReport>, HarnessError> {
    if replicas == 0 {
        return Err(HarnessError::Config("replicas must be >= 1".into()));
    }
    if t_list.is_empty() || q_list.is_empty() {
        return Err(HarnessError::Config("empty t or q grid".into()));
    }
    let mut ts = t_list.to_vec();
    ts.sort_by(f64::total_cmp);
    // exact values first so configuration errors surface before simulating
    let mut exacts = Vec::new();
    for &t in &ts {
        for &q in q_list {
            exacts.push(target.exact(t, q)?);
        }
    }

    let rows: Vec<Vec<f64>> = match target {
        MomentTarget::MellinX1 => replica_map(threads, replicas, StreamBuf::new, |buf, r| {
            let mut rng = substream(seed, stream_tag, r);
            let sizes = buf.root_sizes_over_grid(n as u32, &ts, &mut rng);
            let mut row = Vec::with_capacity(ts.len() * q_list.len());
            for (g, &t) in ts.iter().enumerate() {
                let w = normalized_weight(n, t, sizes[g]);
                for &q in q_list {
                    row.push(w.powf(q));
                }
            }
            row
        }),
        MomentTarget::Rho { i } => replica_map(threads, replicas, || (), |_, r| {
            let mut rng = substream(seed, stream_tag, r);
            let tree = gen_tree(n as u32, &mut rng).expect("n >= 1");
            let clocks = gen_clocks(n as u32, &mut rng).expect("n >= 2");
            let mut row = Vec::with_capacity(ts.len() * q_list.len());
            for &t in &ts {
                let w = subtree_cluster_weight(&tree, &clocks, i as u32, t)
                    .expect("block index validated");
                for &q in q_list {
                    row.push(w.powf(q));
                }
            }
            row
        }),
        MomentTarget::Total => replica_map(threads, replicas, StreamBuf::new, |buf, r| {
            let mut rng = substream(seed, stream_tag, r);
            let mut row = Vec::with_capacity(ts.len() * q_list.len());
            for &t in &ts {
                let sizes = buf.percolated_sizes(n as u32, t, &mut rng);
                for &q in q_list {
                    let sum_q: f64 = sizes.iter().map(|&s| (s as f64).powf(q)).sum();
                    row.push(sum_q / (n as f64).powf((-t).exp() * q));
                }
            }
            row
        }),
        MomentTarget::JointX1X2 { q2, .. } => {
            replica_map(threads, replicas, StreamBuf::new, |buf, r| {
                let mut rng = substream(seed, stream_tag, r);
                let mut row = Vec::with_capacity(ts.len() * q_list.len());
                for &t in &ts {
                    let sizes = buf.percolated_sizes(n as u32, t, &mut rng);
                    let x1 = normalized_weight(n, t, sizes[0]);
                    let x2 = if sizes.len() > 1 {
                        normalized_weight(n, t, sizes[1])
                    } else {
                        0.0
                    };
                    for &q in q_list {
                        row.push(x1.powf(q) * x2.powf(q2));
                    }
                }
                row
            })
        }
        MomentTarget::C3Limit { block } => {
            replica_map(threads, replicas, StreamBuf::new, |buf, r| {
                let mut rng = substream(seed, stream_tag, r);
                let mut row = Vec::with_capacity(ts.len() * q_list.len());
                for &t in &ts {
                    let sizes = buf.percolated_sizes(n as u32, t, &mut rng);
                    let p = (-t).exp();
                    let w = if sizes.len() >= block as usize {
                        (block as f64).powf(p)
                            * normalized_weight(n, t, sizes[block as usize - 1])
                    } else {
                        0.0
                    };
                    for &q in q_list {
                        row.push(w.powf(q));
                    }
                }
                row
            })
        }
    };

    let mut reports = Vec::new();
    let mut col = 0usize;
    for &t in &ts {
        for &q in q_list {
            let values: Vec<f64> = rows.iter().map(|row| row[col]).collect();
            reports.push(build_report(
                target.label(t, q),
                &values,
                exacts[col],
                n,
                t,
                q,
            ));
            col += 1;
        }
    }
    Ok(reports)
}
