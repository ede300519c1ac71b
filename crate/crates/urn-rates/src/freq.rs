//! Frequency form of the splitting-rate measure: under **r**, the second
//! block's asymptotic frequency x carries density x^{−2} on (0,1), so
//!
//! ∫ f(|B₁|,|B₂|) d**r** = ∫₀¹ f(1−x, x) x^{−2} dx,
//!
//! and after the log map the tail is Λ((−∞,−y]) = 1/(e^y − 1). The integral
//! of (1−|B₁|) against **r** diverges, which is exhibited through truncations.

use exact_dist::adaptive_simpson;

use crate::UrnRatesError;

/// Λ((−∞,−y]) = 1/(e^y−1): the rate of root-cluster log-drops of magnitude
/// ≥ y, per unit time.
pub fn lambda_tail(y: f64) -> f64 {
    assert!(y > 0.0, "lambda_tail requires y > 0");
    1.0 / y.exp_m1()
}

/// Truncated frequency integral ∫_δ^1 f(1−x, x) x^{−2} dx. The substitution
/// u = 1/x absorbs the weight exactly: ∫_1^{1/δ} f(1−1/u, 1/u) du, evaluated
/// over dyadic segments.
pub fn freq_integral_truncated<F: Fn(f64, f64) -> f64>(
    f: F,
    delta: f64,
) -> Result<f64, UrnRatesError> {
    assert!(delta > 0.0 && delta < 1.0, "truncation must lie in (0,1)");
    let upper = 1.0 / delta;
    let mut total = 0.0;
    let mut lo = 1.0f64;
    while lo < upper {
        let hi = (lo * 2.0).min(upper);
        total += adaptive_simpson(
            |u| {
                let x = 1.0 / u;
                f(1.0 - x, x)
            },
            lo,
            hi,
            1e-10,
        )?;
        lo = hi;
    }
    Ok(total)
}

/// Full frequency integral, as the limit of truncations δ → 0. Truncations
/// are driven down geometrically until two successive refinements agree;
/// integrands whose truncations keep growing (the measure is infinite, e.g.
/// f = 1 − |B₁|) are reported as divergent rather than extrapolated.
pub fn freq_integral<F: Fn(f64, f64) -> f64 + Copy>(f: F) -> Result<f64, UrnRatesError> {
    let mut delta = 0.25f64;
    let mut prev = freq_integral_truncated(f, delta)?;
    let mut stable = 0;
    while delta > 1e-12 {
        delta *= 0.25;
        let cur = freq_integral_truncated(f, delta)?;
        if (cur - prev).abs() <= 1e-8 * cur.abs().max(1.0) {
            stable += 1;
            if stable >= 2 {
                return Ok(cur);
            }
        } else {
            stable = 0;
        }
        prev = cur;
    }
    Err(UrnRatesError::Divergent { last: prev })
}
