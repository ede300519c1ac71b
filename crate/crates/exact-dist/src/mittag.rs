//! Series form of the Mittag-Leffler density with parameter α = e^{−t}, the
//! law of the root-cluster weight X₁(t):
//!
//! f(x) = (e^t/π) Σ_{k≥1} (−1)^{k+1}/k! · Γ(kα+1) · x^{k−1} · sin(πkα).
//!
//! The alternating terms cancel catastrophically deep in the tail: past some
//! radius the f64 round-off of the largest term exceeds the value itself and
//! nothing can be certified. The radius where that predicted noise reaches
//! 1e−7 is precomputed per t; inside it the density is good to ≈1e−7
//! absolute, beyond it evaluation is refused and integrals treat the
//! remaining (superexponentially small, ≲1e−7) mass as zero.
//!
//! Cross-checks: ∫f = 1 and ∫x^q f = Γ(q+1)/Γ(αq+1) by quadrature (tests),
//! and as α → 0 the series collapses to e^{−x}.

use crate::quad::adaptive_simpson_noisy;
use crate::special::ln_gamma;
use crate::ExactDistError;

const K_CAP: usize = 500;

/// Round-off carried by the largest series term, relative (measured ≈5e−13;
/// 1e−12 leaves a safety factor).
const NOISE_PER_MAX_TERM: f64 = 1e-12;

/// Largest pointwise noise accepted inside the certified support.
const NOISE_CEILING: f64 = 3e-7;

/// Mittag-Leffler density with parameter e^{−t}, coefficients precomputed for
/// a fixed t > 0.
#[derive(Debug, Clone)]
pub struct MlDensity {
    t: f64,
    alpha: f64,
    /// ln |c_k| and sign of c_k where f(x) = Σ c_k x^{k−1}, k starting at 1.
    ln_mag: Vec<f64>,
    sign: Vec<f64>,
    support: f64,
}

impl MlDensity {
    pub fn new(t: f64) -> Self {
        assert!(t > 0.0, "MlDensity requires t > 0");
        let alpha = (-t).exp();
        let pref = t - std::f64::consts::PI.ln(); // ln(e^t/π)
        let mut ln_mag = Vec::with_capacity(K_CAP);
        let mut sign = Vec::with_capacity(K_CAP);
        for k in 1..=K_CAP {
            let kf = k as f64;
            let s = (std::f64::consts::PI * kf * alpha).sin();
            let parity = if k % 2 == 1 { 1.0 } else { -1.0 };
            ln_mag.push(pref + ln_gamma(kf * alpha + 1.0) - ln_gamma(kf + 1.0) + s.abs().ln());
            sign.push(parity * s.signum());
        }
        let support = certified_support(&ln_mag);
        MlDensity {
            t,
            alpha,
            ln_mag,
            sign,
            support,
        }
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Radius inside which the series value is certified to ≈1e−7 absolute.
    pub fn support(&self) -> f64 {
        self.support
    }

    /// Density at x ≥ 0, for x inside the certified support. The series stops
    /// once the terms are decreasing and below 1e−14 of the partial sum (or
    /// below the round-off floor of the largest term); exhausting the
    /// 500-term cap is reported as an error, never silently truncated.
    pub fn density(&self, x: f64) -> Result<f64, ExactDistError> {
        assert!(x >= 0.0, "density requires x >= 0");
        if x > self.support {
            return Err(ExactDistError::SeriesNoConvergence { x, terms: K_CAP });
        }
        if x == 0.0 {
            // k = 1 term only; higher terms carry x^{k−1}.
            return Ok(self.sign[0] * self.ln_mag[0].exp());
        }
        let ln_x = x.ln();
        let mut sum = 0.0;
        let mut max_mag = 0.0f64;
        let mut small_run = 0;
        let mut converged = false;
        for k in 1..=K_CAP {
            let mag = (self.ln_mag[k - 1] + (k as f64 - 1.0) * ln_x).exp();
            sum += self.sign[k - 1] * mag;
            max_mag = max_mag.max(mag);
            // A single small term is not evidence of convergence: sin(πkα)
            // can vanish accidentally (exactly so for α = 1/2 at even k).
            if k > 1 && (mag < 1e-14 * sum.abs() || mag < 1e-17 * max_mag) {
                small_run += 1;
                if small_run >= 3 {
                    converged = true;
                    break;
                }
            } else {
                small_run = 0;
            }
        }
        if !converged {
            return Err(ExactDistError::SeriesNoConvergence { x, terms: K_CAP });
        }
        let noise = NOISE_PER_MAX_TERM * max_mag;
        if sum.abs() <= noise || (sum < 0.0 && sum > -1e-10) {
            return Ok(0.0);
        }
        if sum < 0.0 {
            return Err(ExactDistError::SeriesNoConvergence { x, terms: K_CAP });
        }
        Ok(sum)
    }

    /// ∫_a^b f(x) dx by adaptive quadrature, clamped to the certified
    /// support (the mass beyond it is below ≈1e−7 and treated as zero). The
    /// quadrature's noise floor matches the residual flicker the truncated
    /// series leaves around its zero cutoff.
    pub fn integral(&self, a: f64, b: f64, tol: f64) -> Result<f64, ExactDistError> {
        let a = a.min(self.support);
        let b = b.min(self.support);
        let mut failed = None;
        let v = adaptive_simpson_noisy(
            |x| match self.density(x) {
                Ok(v) => v,
                Err(e) => {
                    failed.get_or_insert(e);
                    0.0
                }
            },
            a,
            b,
            tol,
            1e-8,
        )?;
        match failed {
            Some(e) => Err(e),
            None => Ok(v),
        }
    }

    /// Total mass ∫₀^∞ f, integrating in unit segments until the remaining
    /// contributions fall below 1e−13 (or the certified support is reached).
    pub fn normalization(&self, tol: f64) -> Result<f64, ExactDistError> {
        let mut total = 0.0;
        let mut a = 0.0;
        loop {
            let b = a + 1.0;
            let seg = self.integral(a, b, tol)?;
            total += seg;
            if b >= self.support || (seg.abs() < 1e-13 && a >= 2.0) {
                return Ok(total);
            }
            a = b;
        }
    }

    /// CDF values at an ascending grid of points, accumulated segment by
    /// segment so the quadrature work is shared. Used by the one-sample KS
    /// test against a simulated sample.
    pub fn cdf_at_sorted(&self, xs: &[f64], tol_per_seg: f64) -> Result<Vec<f64>, ExactDistError> {
        let mut out = Vec::with_capacity(xs.len());
        let mut acc = 0.0;
        let mut prev = 0.0;
        for &x in xs {
            assert!(x >= prev, "cdf_at_sorted requires ascending input");
            acc += self.integral(prev, x, tol_per_seg)?;
            out.push(acc.clamp(0.0, 1.0));
            prev = x;
        }
        Ok(out)
    }
}

/// Largest x at which the predicted series noise stays below the ceiling:
/// max_k exp(ln|c_k| + (k−1)ln x) · NOISE_PER_MAX_TERM ≤ NOISE_CEILING.
/// The envelope is increasing in x, so bisection suffices.
fn certified_support(ln_mag: &[f64]) -> f64 {
    let thresh = (NOISE_CEILING / NOISE_PER_MAX_TERM).ln();
    let envelope = |x: f64| -> f64 {
        let ln_x = x.ln();
        ln_mag
            .iter()
            .enumerate()
            .map(|(i, &lm)| lm + i as f64 * ln_x)
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let mut hi = 2000.0;
    if envelope(hi) <= thresh {
        return hi;
    }
    let mut lo = 1.0;
    while envelope(lo) > thresh {
        lo *= 0.5;
        if lo < 1e-3 {
            return lo;
        }
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if envelope(mid) <= thresh {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mellin::mellin_x1;

    const LN2: f64 = std::f64::consts::LN_2;

    #[test]
    fn support_is_reasonable() {
        // Enough room for every sample that simulation can realistically
        // produce at these t, and far beyond the bulk of the mass.
        for &t in &[0.3, 0.5, LN2, 1.0, 2.0] {
            let ml = MlDensity::new(t);
            let floor = if t < 0.5 { 3.5 } else { 5.0 };
            assert!(ml.support() > floor, "t = {t}: support {}", ml.support());
        }
    }

    #[test]
    fn density_nonnegative_on_log_grid() {
        let ml = MlDensity::new(0.5);
        let mut x = 1e-3;
        while x <= 100.0 {
            if x <= ml.support() {
                let v = ml.density(x).unwrap();
                assert!(v >= 0.0, "negative density {v} at {x}");
            } else {
                assert!(ml.density(x).is_err());
            }
            x *= 1.5;
        }
    }

    #[test]
    fn normalizes_to_one() {
        for &t in &[0.3, 0.5, LN2, 1.0, 2.0] {
            let ml = MlDensity::new(t);
            let mass = ml.normalization(1e-9).unwrap();
            assert!((mass - 1.0).abs() < 1e-6, "t = {t}: mass {mass}");
        }
    }

    #[test]
    fn quadrature_moments_match_mellin() {
        let ml = MlDensity::new(LN2);
        for &q in &[1.0, 2.0] {
            let mut total = 0.0;
            let mut a = 0.0f64;
            while a < ml.support() {
                let b = (a + 1.0).min(ml.support());
                // The x^q weight amplifies the residual series flicker, so
                // the quadrature noise floor scales with it.
                let seg = adaptive_simpson_noisy(
                    |x| x.powf(q) * ml.density(x).unwrap_or(0.0),
                    a,
                    b,
                    1e-9,
                    1e-8 * (1.0 + b * b),
                )
                .unwrap();
                total += seg;
                a = b;
            }
            let want = mellin_x1(q, LN2);
            assert!((total - want).abs() < 1e-5, "q = {q}: {total} vs {want}");
        }
    }

    #[test]
    fn collapses_to_exponential_for_large_t() {
        let ml = MlDensity::new(8.0);
        for &x in &[0.1, 0.5, 1.0, 2.0, 4.0] {
            let v = ml.density(x).unwrap();
            let e = (-x as f64).exp();
            assert!((v - e).abs() < 2e-3, "x = {x}: {v} vs {e}");
        }
    }

    #[test]
    fn cdf_monotone_and_bounded() {
        let ml = MlDensity::new(0.5);
        let xs: Vec<f64> = (1..=60).map(|i| i as f64 * 0.1).collect();
        let cdf = ml.cdf_at_sorted(&xs, 1e-10).unwrap();
        for w in cdf.windows(2) {
            assert!(w[1] >= w[0] - 1e-12);
        }
        assert!(cdf[0] > 0.0 && *cdf.last().unwrap() <= 1.0);
        assert!(*cdf.last().unwrap() > 0.999);
    }
}
