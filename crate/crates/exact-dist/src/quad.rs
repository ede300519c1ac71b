//! Adaptive Simpson quadrature. Good enough for every integral in this
//! workspace: all integrands are piecewise smooth on finite intervals after
//! the substitutions done at the call sites.

use crate::ExactDistError;

/// Integrates `f` over `[a, b]` to absolute tolerance `tol` by adaptive
/// bisection with Richardson extrapolation of Simpson's rule.
pub fn adaptive_simpson<F: FnMut(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64, ExactDistError> {
    adaptive_simpson_noisy(f, a, b, tol, 0.0)
}

/// Like [`adaptive_simpson`], but also accepts a subinterval once its error
/// estimate falls below `noise_per_width · width`. This keeps the refinement
/// from diverging on integrands carrying additive evaluation noise (truncated
/// series); the extra error is bounded by `noise_per_width · (b − a)` per
/// refinement level reached, and in practice by the noise amplitude itself.
pub fn adaptive_simpson_noisy<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
    noise_per_width: f64,
) -> Result<f64, ExactDistError> {
    assert!(a.is_finite() && b.is_finite() && b >= a);
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    let mut sink = Sink {
        f: &mut f,
        budget: 2_000_000,
        noise_per_width,
    };
    let v = sink.recurse(a, b, fa, fm, fb, whole, tol, 60)?;
    Ok(v)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

struct Sink<'a, F: FnMut(f64) -> f64> {
    f: &'a mut F,
    budget: u64,
    noise_per_width: f64,
}

impl<F: FnMut(f64) -> f64> Sink<'_, F> {
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        &mut self,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64, ExactDistError> {
        if self.budget < 2 {
            return Err(ExactDistError::QuadratureNoConvergence { tol });
        }
        self.budget -= 2;
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = (self.f)(lm);
        let frm = (self.f)(rm);
        let left = simpson(a, m, fa, flm, fm);
        let right = simpson(m, b, fm, frm, fb);
        let delta = left + right - whole;
        let accept = 15.0 * tol.max(self.noise_per_width * (b - a));
        if delta.abs() <= accept || (b - a) < 1e-14 * (a.abs() + b.abs() + 1.0) {
            return Ok(left + right + delta / 15.0);
        }
        if depth == 0 {
            return Err(ExactDistError::QuadratureNoConvergence { tol });
        }
        // The floor keeps refinement from chasing round-off noise in
        // integrands that are themselves truncated series.
        let half = (0.5 * tol).max(1e-17);
        Ok(self.recurse(a, m, fa, flm, fm, left, half, depth - 1)?
            + self.recurse(m, b, fm, frm, fb, right, half, depth - 1)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = adaptive_simpson(|x| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, 1e-12).unwrap();
        // ∫₀² (x³ − 2x + 1) dx = 4 − 4 + 2 = 2
        assert!((v - 2.0).abs() < 1e-11);
    }

    #[test]
    fn exponential_tail() {
        let v = adaptive_simpson(|x| (-x as f64).exp(), 0.0, 40.0, 1e-12).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
    }

    #[test]
    fn handles_one_over_x() {
        let v = adaptive_simpson(|x| 1.0 / x, 1e-6, 1.0, 1e-11).unwrap();
        assert!((v - (1e6f64).ln()).abs() < 1e-8, "got {v}");
    }

    #[test]
    fn jump_discontinuity_converges() {
        let v = adaptive_simpson(|x| if x > 0.5 { 1.0 / x } else { 0.0 }, 0.0, 1.0, 1e-11).unwrap();
        assert!((v - 2.0f64.ln()).abs() < 1e-9, "got {v}");
    }
}
