//! Moment formulas for the block weights and the cumulant of the associated
//! Lévy process, all computed in log space:
//!
//! - `mellin_x1`: E[X₁(t)^q] = Γ(q+1)/Γ(e^{−t}q+1), the Mittag-Leffler
//!   moments of the root-cluster weight;
//! - `rho_moment`: E[ρᵢ(t)^q] = Γ(q+1)Γ(i)/Γ(e^{−t}q+i) for the subtree
//!   cluster rooted at i;
//! - `total_q_moment`: E[Σᵢ Xᵢ(t)^q] = (q−1)/(e^{−t}q−1) · Γ(q)/Γ(e^{−t}q)
//!   for q > e^t, with an independent series route through `rho_moment`;
//! - `kappa`: κ(q) = qψ(q+1) and its Lévy–Khintchine integral form with
//!   Lévy measure Λ(dx) = eˣ(1−eˣ)^{−2} dx on (−∞, 0);
//! - the t→0 joint-moment limit and the n→∞ rescaled-weight limit moments.

use crate::quad::adaptive_simpson;
use crate::special::{digamma, ln_gamma, EULER_MASCHERONI};
use crate::ExactDistError;

/// Mellin transform of the root-cluster weight: E[X₁(t)^q] for q ≥ 0, t ≥ 0.
pub fn mellin_x1(q: f64, t: f64) -> f64 {
    assert!(q >= 0.0 && t >= 0.0, "mellin_x1 requires q >= 0, t >= 0");
    let p = (-t).exp();
    (ln_gamma(q + 1.0) - ln_gamma(p * q + 1.0)).exp()
}

/// E[ρᵢ(t)^q]: q-moment of the weight of the cluster of vertex i inside the
/// subtree rooted at i (i ≥ 1; i = 1 recovers `mellin_x1`).
pub fn rho_moment(q: f64, t: f64, i: u64) -> f64 {
    assert!(q >= 0.0 && t >= 0.0 && i >= 1);
    let p = (-t).exp();
    let i = i as f64;
    (ln_gamma(q + 1.0) + ln_gamma(i) - ln_gamma(p * q + i)).exp()
}

/// Mean intensity E[Σᵢ Xᵢ(t)^q], finite only for q > e^t.
pub fn total_q_moment(q: f64, t: f64) -> Result<f64, ExactDistError> {
    let et = t.exp();
    if q <= et {
        return Err(ExactDistError::MomentDiverges { q, et });
    }
    let p = (-t).exp();
    Ok((q - 1.0) / (p * q - 1.0) * (ln_gamma(q) - ln_gamma(p * q)).exp())
}

/// Series route to the same quantity: E[X₁^q] + (1−e^{−t}) Σ_{i≥2} E[ρᵢ^q],
/// summing `terms` leading terms numerically and closing the i^{−e^{−t}q}
/// tail with the telescoping identity
/// Γ(i)/Γ(i+s−1) − Γ(i+1)/Γ(i+s) = (s−1)·Γ(i)/Γ(i+s),
/// so Σ_{i>I} Γ(i)/Γ(i+s) = Γ(I+1)/((s−1)·Γ(I+s)).
pub fn total_q_moment_series(q: f64, t: f64, terms: usize) -> Result<f64, ExactDistError> {
    let et = t.exp();
    if q <= et {
        return Err(ExactDistError::MomentDiverges { q, et });
    }
    let p = (-t).exp();
    let s = p * q;
    let last = 1 + terms.max(1) as u64;
    let mut sum = 0.0;
    for i in 2..=last {
        sum += (ln_gamma(i as f64) - ln_gamma(s + i as f64)).exp();
    }
    let tail = (ln_gamma(last as f64 + 1.0) - ln_gamma(s + last as f64)).exp() / (s - 1.0);
    let weight_one = 1.0 - (-t).exp();
    Ok(mellin_x1(q, t) + weight_one * ln_gamma(q + 1.0).exp() * (sum + tail))
}

/// Cumulant of the spectrally negative Lévy process driving ln X₁:
/// κ(q) = qψ(q+1).
pub fn kappa(q: f64) -> f64 {
    assert!(q >= 0.0);
    if q == 0.0 {
        return 0.0;
    }
    q * digamma(q + 1.0)
}

/// Lévy–Khintchine form of the same cumulant:
/// κ(q) = −γq + ∫_{−∞}^0 (e^{qx} − 1 − qx) eˣ(1−eˣ)^{−2} dx.
///
/// The density rewrites as 1/(4 sinh²(x/2)), which is numerically stable all
/// the way to 0 where the integrand tends to q²/2; the lower cutoff at −40
/// discards an exponentially small tail.
pub fn kappa_levy_khintchine(q: f64) -> Result<f64, ExactDistError> {
    assert!(q >= 0.0);
    if q == 0.0 {
        return Ok(0.0);
    }
    let integrand = |x: f64| {
        if x == 0.0 {
            q * q / 2.0
        } else {
            let num = (q * x).exp_m1() - q * x;
            let sh = (0.5 * x).sinh();
            num / (4.0 * sh * sh)
        }
    };
    let integral = adaptive_simpson(integrand, -40.0, 0.0, 1e-10)?;
    Ok(-EULER_MASCHERONI * q + integral)
}

/// ∫₀^t κ(e^{−s} q) ds, the log of the exact OU moment generating function.
pub fn kappa_ou_integral(q: f64, t: f64, tol: f64) -> Result<f64, ExactDistError> {
    assert!(q >= 0.0 && t >= 0.0);
    adaptive_simpson(|s| kappa((-s).exp() * q), 0.0, t, tol)
}

/// Limit moments of the rescaled late blocks (n^{e^{−t}} X_n(t) as n → ∞):
/// E[(V^{e^{−t}} X₁(t))^q] = (1−e^{−t})^{e^{−t}q} Γ(q+1), with V exponential
/// of rate (1−e^{−t})^{−1} independent of X₁(t).
pub fn c3_limit_moment(q: f64, t: f64) -> f64 {
    assert!(q >= 0.0 && t > 0.0);
    let p = (-t).exp();
    let ln_one_minus_p = (-(-t).exp_m1()).ln();
    (p * q * ln_one_minus_p + ln_gamma(q + 1.0)).exp()
}

/// t → 0 limit of (1/t)·E[X₁^{q₁}(t) X₂^{q₂}(t)] = B(q₁+1, q₂−1), defined for
/// q₂ > 1.
pub fn limit_joint_t0(q1: f64, q2: f64) -> Result<f64, ExactDistError> {
    assert!(q1 >= 0.0);
    if q2 <= 1.0 {
        return Err(ExactDistError::Domain(q2, "limit_joint_t0 requires q2 > 1"));
    }
    Ok((ln_gamma(q1 + 1.0) + ln_gamma(q2 - 1.0) - ln_gamma(q1 + q2)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    const LN2: f64 = std::f64::consts::LN_2;

    #[test]
    fn mellin_x1_reference_values() {
        // Γ(3)/Γ(2) = 2 at (q,t) = (2, ln 2)
        assert!((mellin_x1(2.0, LN2) - 2.0).abs() < 1e-13);
        // t = 0 or q = 0 give 1
        for &q in &[0.0, 0.7, 3.2] {
            assert!((mellin_x1(q, 0.0) - 1.0).abs() < 1e-13);
        }
        for &t in &[0.0, 0.4, 2.0] {
            assert!((mellin_x1(0.0, t) - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn mellin_x1_large_t_limit_is_gamma() {
        // E[X₁(t)^q] → Γ(q+1). The approach is not monotone globally (the
        // ratio rides through the minimum of Γ near 1.46), but once
        // e^{−t}q + 1 has passed that point the gap shrinks monotonically.
        for &q in &[1.0, 2.0, 4.0] {
            let target = ln_gamma(q + 1.0).exp();
            let t_start = (q / 0.46f64).ln().max(0.0) + 0.5;
            let mut prev_gap = (mellin_x1(q, t_start) - target).abs();
            for i in 1..=30 {
                let gap = (mellin_x1(q, t_start + i as f64) - target).abs();
                assert!(gap <= prev_gap + 1e-12, "q={q} step {i}");
                prev_gap = gap;
            }
            assert!((mellin_x1(q, t_start + 30.0) - target).abs() < 1e-9 * target);
        }
    }

    #[test]
    fn rho_moment_reference_values() {
        // i = 1 reduces to the Mellin transform
        assert!((rho_moment(2.0, LN2, 1) - mellin_x1(2.0, LN2)).abs() < 1e-13);
        // (q,t,i) = (1, ln 2, 2): Γ(2)Γ(2)/Γ(2.5) = 1/Γ(2.5) ≈ 0.75225
        let want = (-ln_gamma(2.5)).exp();
        assert!((rho_moment(1.0, LN2, 2) - want).abs() < 1e-13);
        assert!((want - 0.75225).abs() < 1e-5);
        // q = 0 gives 1 for any i
        assert!((rho_moment(0.0, 1.3, 17) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn total_q_moment_reference_value() {
        // (q,t) = (3, ln 2): (2)/(1/2)·Γ(3)/Γ(1.5) = 16/√π ≈ 9.0270
        let want = 16.0 / std::f64::consts::PI.sqrt();
        let got = total_q_moment(3.0, LN2).unwrap();
        assert!((got - want).abs() < 1e-12 * want);
        assert!((want - 9.0270333).abs() < 1e-6);
    }

    #[test]
    fn total_q_moment_pole() {
        assert!(matches!(
            total_q_moment(2.0, LN2),
            Err(ExactDistError::MomentDiverges { .. })
        ));
        assert!(matches!(
            total_q_moment(1.0, 0.0),
            Err(ExactDistError::MomentDiverges { .. })
        ));
    }

    #[test]
    fn series_route_matches_closed_form() {
        for &(q, t) in &[(3.0, LN2), (4.0, 1.0), (2.5, 0.3)] {
            let closed = total_q_moment(q, t).unwrap();
            let series = total_q_moment_series(q, t, 20_000).unwrap();
            assert!(
                (closed - series).abs() < 1e-8,
                "(q,t)=({q},{t}): closed {closed} vs series {series}"
            );
        }
    }

    #[test]
    fn kappa_reference_values() {
        assert!(kappa(0.0) == 0.0);
        // κ(1) = ψ(2) = 1 − γ ≈ 0.42278
        assert!((kappa(1.0) - (1.0 - EULER_MASCHERONI)).abs() < 1e-12);
        assert!((kappa(1.0) - 0.42278).abs() < 1e-5);
    }

    #[test]
    fn kappa_convex_and_eventually_increasing() {
        // κ is convex on [0,10]; κ'(0) = ψ(1) = −γ < 0, so it dips below
        // zero first and increases from ≈0.22 onward.
        let h = 1e-3;
        let mut q = h;
        while q < 10.0 {
            let d2 = (kappa(q + h) - 2.0 * kappa(q) + kappa(q - h)) / (h * h);
            assert!(d2 > -1e-6, "kappa not convex at {q}");
            if q >= 0.5 {
                let d1 = (kappa(q + h) - kappa(q)) / h;
                assert!(d1 > 0.0, "kappa not increasing at {q}");
            }
            q += 0.25;
        }
        assert!(kappa(0.1) < 0.0 && kappa(1.0) > 0.0);
    }

    #[test]
    fn levy_khintchine_matches_digamma_form() {
        for &q in &[0.5, 1.0, 2.0, 5.0] {
            let lk = kappa_levy_khintchine(q).unwrap();
            assert!((lk - kappa(q)).abs() < 1e-6, "q = {q}: {lk} vs {}", kappa(q));
        }
        assert!(kappa_levy_khintchine(0.0).unwrap() == 0.0);
    }

    #[test]
    fn ou_integral_matches_log_mellin() {
        for &q in &[0.5, 1.0, 2.0, 4.0] {
            for &t in &[0.3, 0.7, 1.2] {
                let lhs = kappa_ou_integral(q, t, 1e-11).unwrap();
                let rhs = mellin_x1(q, t).ln();
                assert!((lhs - rhs).abs() < 1e-8, "q={q} t={t}");
            }
        }
    }

    #[test]
    fn c3_limit_reference() {
        assert!((c3_limit_moment(0.0, 0.7) - 1.0).abs() < 1e-13);
        // t → ∞ recovers Γ(q+1)
        assert!((c3_limit_moment(2.0, 40.0) - 2.0).abs() < 1e-9);
        // consistency with the Stirling limit of rho_moment at n = 10^6
        for &(q, t) in &[(1.0, 0.5), (2.0, 1.0)] {
            let n = 1e6;
            let p = (-t as f64).exp();
            let i = (n / (1.0 - p)).round() as u64;
            let finite = (n.powf(p * q)) * rho_moment(q, t, i);
            let limit = c3_limit_moment(q, t);
            assert!(
                ((finite - limit) / limit).abs() < 0.01,
                "(q,t)=({q},{t}): {finite} vs {limit}"
            );
        }
    }

    #[test]
    fn limit_joint_t0_reference() {
        // B(1,1) = 1 and B(2,1) = 1/2
        assert!((limit_joint_t0(0.0, 2.0).unwrap() - 1.0).abs() < 1e-13);
        assert!((limit_joint_t0(1.0, 2.0).unwrap() - 0.5).abs() < 1e-13);
        assert!(limit_joint_t0(1.0, 1.0).is_err());
    }

    #[test]
    fn semigroup_factorization_identity() {
        // E[X₁(s+t)^q] = E[X₁(s)^{qe^{−t}}]·E[X₁(t)^q]
        for &q in &[0.5, 1.0, 2.0, 4.0] {
            for &s in &[0.3, 0.7, 1.2] {
                for &t in &[0.3, 0.7, 1.2] {
                    let lhs = mellin_x1(q, s + t);
                    let rhs = mellin_x1(q * (-t as f64).exp(), s) * mellin_x1(q, t);
                    assert!(
                        (lhs - rhs).abs() < 1e-12 * lhs.max(1.0),
                        "q={q} s={s} t={t}"
                    );
                }
            }
        }
    }
}
