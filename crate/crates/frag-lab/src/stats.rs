//! Goodness-of-fit machinery: one- and two-sample Kolmogorov-Smirnov tests
//! with the asymptotic Kolmogorov p-value, and the chi-square test with the
//! regularized-gamma tail. Sample sizes in this workspace stay at 10³ and
//! above, where the asymptotics are adequate.

use exact_dist::gamma_q;

use crate::report::TestVerdict;
use crate::{HarnessError, ALPHA};

/// Complement of the Kolmogorov distribution, Q(λ) = 2Σ(−1)^{k−1}e^{−2k²λ²}.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let term = (-2.0 * (k as f64 * lambda).powi(2)).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// KS distance of a sorted sample against CDF values precomputed at exactly
/// those points.
pub fn ks_distance_sorted(sorted: &[f64], cdf_values: &[f64]) -> f64 {
    assert_eq!(sorted.len(), cdf_values.len());
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &f) in cdf_values.iter().enumerate() {
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    d
}

/// One-sample KS test against a reference CDF.
pub fn ks_one_sample<F: Fn(f64) -> f64>(
    name: &str,
    mut sample: Vec<f64>,
    cdf: F,
) -> Result<TestVerdict, HarnessError> {
    if sample.is_empty() || sample.iter().any(|x| x.is_nan()) {
        return Err(HarnessError::DegenerateSample);
    }
    sample.sort_by(f64::total_cmp);
    let cdf_values: Vec<f64> = sample.iter().map(|&x| cdf(x)).collect();
    Ok(ks_verdict_from_sorted(name, &sample, &cdf_values))
}

/// One-sample KS verdict from a sorted sample and its CDF values (used when
/// the CDF is itself a batch quadrature).
pub fn ks_verdict_from_sorted(name: &str, sorted: &[f64], cdf_values: &[f64]) -> TestVerdict {
    let d = ks_distance_sorted(sorted, cdf_values);
    let p = kolmogorov_q((sorted.len() as f64).sqrt() * d);
    TestVerdict::statistical(name, d, p, p >= ALPHA)
}

/// Two-sample KS test with the asymptotic p-value at effective size
/// mn/(m+n). Ties are resolved by advancing both walks past the tied value
/// before comparing.
pub fn ks_two_sample(
    name: &str,
    mut a: Vec<f64>,
    mut b: Vec<f64>,
) -> Result<TestVerdict, HarnessError> {
    if a.is_empty() || b.is_empty() || a.iter().chain(&b).any(|x| x.is_nan()) {
        return Err(HarnessError::DegenerateSample);
    }
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (m, n) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        let v = a[i].min(b[j]);
        while i < a.len() && a[i] == v {
            i += 1;
        }
        while j < b.len() && b[j] == v {
            j += 1;
        }
        d = d.max((i as f64 / m - j as f64 / n).abs());
    }
    let eff = (m * n / (m + n)).sqrt();
    let p = kolmogorov_q(eff * d);
    Ok(TestVerdict::statistical(name, d, p, p >= ALPHA))
}

/// Chi-square goodness of fit of observed counts against cell probabilities.
pub fn chi2_gof(
    name: &str,
    observed: &[u64],
    probs: &[f64],
) -> Result<TestVerdict, HarnessError> {
    assert_eq!(observed.len(), probs.len());
    let total: u64 = observed.iter().sum();
    if observed.len() < 2 || total == 0 {
        return Err(HarnessError::DegenerateSample);
    }
    let mut stat = 0.0;
    for (&obs, &p) in observed.iter().zip(probs) {
        let expect = p * total as f64;
        if expect < 5.0 {
            return Err(HarnessError::SparseCells);
        }
        let diff = obs as f64 - expect;
        stat += diff * diff / expect;
    }
    let df = (observed.len() - 1) as f64;
    let p = gamma_q(df / 2.0, stat / 2.0);
    Ok(TestVerdict::statistical(name, stat, p, p >= ALPHA))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kolmogorov_q_reference_points() {
        // classic table values
        assert!((kolmogorov_q(1.0) - 0.26999967).abs() < 1e-6);
        assert!((kolmogorov_q(2.0) - 6.7092526e-4).abs() < 1e-9);
        assert!(kolmogorov_q(0.1) == 1.0);
        assert!(kolmogorov_q(5.0) < 1e-20);
    }

    #[test]
    fn ks_one_sample_accepts_the_null() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let sample: Vec<f64> = (0..5000).map(|_| rng.random::<f64>()).collect();
        let v = ks_one_sample("uniform", sample, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!(v.pass, "p = {:?}", v.p_value);
    }

    #[test]
    fn ks_one_sample_rejects_wrong_cdf() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let sample: Vec<f64> = (0..5000).map(|_| rng.random::<f64>().powi(2)).collect();
        let v = ks_one_sample("not-uniform", sample, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!(!v.pass);
    }

    #[test]
    fn ks_one_sample_p_values_are_roughly_uniform_under_null() {
        // null calibration: repeated tests should give p spread over (0,1)
        let mut small = 0;
        let reps = 200;
        for s in 0..reps {
            let mut rng = ChaCha8Rng::seed_from_u64(100 + s);
            let sample: Vec<f64> = (0..1500).map(|_| rng.random::<f64>()).collect();
            let v = ks_one_sample("cal", sample, |x| x.clamp(0.0, 1.0)).unwrap();
            if v.p_value.unwrap() < 0.1 {
                small += 1;
            }
        }
        // expect ≈ 20 ± binomial noise; asymptotic KS skews slightly
        assert!((5..=45).contains(&small), "P(p<0.1) fraction off: {small}/{reps}");
    }

    #[test]
    fn ks_two_sample_same_law_passes_and_shifted_fails() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a: Vec<f64> = (0..3000).map(|_| rng.random::<f64>()).collect();
        let b: Vec<f64> = (0..2500).map(|_| rng.random::<f64>()).collect();
        let c: Vec<f64> = (0..2500).map(|_| rng.random::<f64>() + 0.08).collect();
        assert!(ks_two_sample("same", a.clone(), b).unwrap().pass);
        assert!(!ks_two_sample("shifted", a, c).unwrap().pass);
    }

    #[test]
    fn chi2_detects_skew_and_accepts_null() {
        let probs = [0.25, 0.25, 0.5];
        let v = chi2_gof("fair", &[2500, 2500, 5000], &probs).unwrap();
        assert!(v.pass && v.statistic < 1e-9);
        let v = chi2_gof("skewed", &[3000, 2000, 5000], &probs).unwrap();
        assert!(!v.pass);
        assert!(chi2_gof("sparse", &[1, 1, 2], &probs).is_err());
    }
}
