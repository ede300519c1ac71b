//! μ_{j,t}, the law of the smallest label outside the first j blocks, and the
//! joint Mellin transform of (X₁(t), …, X_{j+1}(t)):
//!
//! E[X₁^{q₁}⋯X_{j+1}^{q_{j+1}}] = Σ_{k≥j+1} μ_{j,t}(k)
//!   Σ_{k₁+⋯+k_j=k−1} θ_{j,k−1}(k₁,…,k_j) · Γ(k)/Γ(qe^{−t}+k)
//!   · Π_{i=1}^{j+1} Γ(qᵢ+kᵢ)/Γ(kᵢ),   with k_{j+1} = 1 and q = Σqᵢ.
//!
//! The sum over k is truncated at a configurable level; the discarded tail is
//! bounded by the geometric decay of μ_{j,t} times a monotone envelope of the
//! Γ-ratio factor, and the bound is returned alongside the value.

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::special::ln_gamma;
use crate::theta::{compositions, theta_general, theta_meir_moon, ThetaQuery};
use crate::ExactDistError;

/// μ_{j,t}(k) = C(k−2, k−j−1) (e^{−t})^{k−j−1} (1−e^{−t})^j for k ≥ j+1:
/// the shifted negative binomial law of min Π_{j+1}(t).
pub fn mu_jt(j: usize, t: f64, k: u64) -> Result<f64, ExactDistError> {
    assert!(j >= 1, "mu_jt requires j >= 1");
    assert!(t > 0.0, "mu_jt requires t > 0");
    if k < j as u64 + 1 {
        return Err(ExactDistError::Domain(k as f64, "mu_jt requires k >= j+1"));
    }
    let jf = j as f64;
    let kf = k as f64;
    // C(k−2, k−j−1) = Γ(k−1)/(Γ(j)Γ(k−j)), and ln e^{−t} = −t.
    let ln_binom = ln_gamma(kf - 1.0) - ln_gamma(jf) - ln_gamma(kf - jf);
    let ln_one_minus_p = (-(-t).exp_m1()).ln();
    Ok((ln_binom - (kf - jf - 1.0) * t + jf * ln_one_minus_p).exp())
}

/// Query for the truncated joint Mellin transform.
#[derive(Debug, Clone)]
pub struct JointMellinQuery {
    pub j: usize,
    pub t: f64,
    /// q₁,…,q_{j+1}, all ≥ 0.
    pub qs: Vec<f64>,
    /// Truncation level K ≥ j+1 for the outer sum over k.
    pub k_max: usize,
}

/// Truncated value plus a bound on the discarded tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointMellin {
    pub value: f64,
    pub tail_bound: f64,
}

/// Exact-θ truncation cap for j ≥ 3 (big-rational nested sums per
/// composition get expensive beyond this).
const GENERAL_J_KMAX: usize = 64;

pub fn joint_mellin(query: &JointMellinQuery) -> Result<JointMellin, ExactDistError> {
    let j = query.j;
    assert!(j >= 1, "joint_mellin requires j >= 1");
    assert!(query.t > 0.0, "joint_mellin requires t > 0");
    if query.qs.len() != j + 1 || query.qs.iter().any(|&q| q < 0.0) {
        return Err(ExactDistError::InvalidComposition);
    }
    if query.k_max < j + 1 {
        return Err(ExactDistError::AccuracyUnreachable { k_max: query.k_max });
    }
    if j >= 3 && query.k_max > GENERAL_J_KMAX {
        return Err(ExactDistError::EnumerationTooLarge {
            k: query.k_max as u64,
            cap: GENERAL_J_KMAX as u64,
        });
    }
    let t = query.t;
    let p = (-t).exp();
    let q: f64 = query.qs.iter().sum();
    let gamma_last = ln_gamma(query.qs[j] + 1.0).exp();

    let mut value = 0.0;
    for k in (j as u64 + 1)..=(query.k_max as u64) {
        let m = k - 1; // θ lives on compositions of k−1
        let outer = mu_jt(j, t, k)? * (ln_gamma(k as f64) - ln_gamma(q * p + k as f64)).exp();
        if outer == 0.0 {
            continue;
        }
        let inner = match j {
            1 => (ln_gamma(query.qs[0] + m as f64) - ln_gamma(m as f64)).exp(),
            2 => {
                let mut acc = 0.0;
                for k1 in 1..m {
                    let k2 = m - k1;
                    let theta = big_ratio_to_f64(&theta_meir_moon(m, k1, k2)?);
                    acc += theta
                        * (ln_gamma(query.qs[0] + k1 as f64) - ln_gamma(k1 as f64)
                            + ln_gamma(query.qs[1] + k2 as f64)
                            - ln_gamma(k2 as f64))
                        .exp();
                }
                acc
            }
            _ => {
                let mut acc = 0.0;
                for ks in compositions(m, j) {
                    let theta =
                        big_ratio_to_f64(&theta_general(&ThetaQuery::new(j, m, ks.clone())?)?);
                    if theta == 0.0 {
                        continue;
                    }
                    let mut ln_prod = 0.0;
                    for (qi, &ki) in query.qs.iter().zip(&ks) {
                        ln_prod += ln_gamma(qi + ki as f64) - ln_gamma(ki as f64);
                    }
                    acc += theta * ln_prod.exp();
                }
                acc
            }
        };
        value += outer * gamma_last * inner;
    }

    // Tail: μ(k+1)/μ(k) = ((k−1)/(k−j))·p is decreasing in k, the composition
    // sum of θ is 1, ΠΓ(qᵢ+kᵢ)/Γ(kᵢ) ≤ (k+q)^q whose step ratio is below
    // e^{q/(K+q)}, and Γ(k)/Γ(qp+k) is decreasing. Hence a geometric bound.
    let kn = (query.k_max + 1) as f64;
    let rho = (kn - 1.0) / (kn - j as f64) * p;
    let growth = (q / (kn - 1.0 + q)).exp();
    let r_eff = rho * growth;
    if r_eff >= 1.0 {
        return Err(ExactDistError::AccuracyUnreachable { k_max: query.k_max });
    }
    let envelope = (ln_gamma(kn) - ln_gamma(q * p + kn) + q * (kn + q).ln()).exp() * gamma_last;
    let tail_bound = mu_jt(j, t, query.k_max as u64 + 1)? * envelope / (1.0 - r_eff);

    Ok(JointMellin { value, tail_bound })
}

/// f64 view of a big rational, shifting both sides down when they exceed the
/// double range.
pub(crate) fn big_ratio_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let bits = r.numer().bits().max(r.denom().bits());
    let shift = bits.saturating_sub(512);
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}
