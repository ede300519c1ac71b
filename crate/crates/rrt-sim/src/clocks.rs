//! Unit-rate exponential removal times, one per edge.

use rand::Rng;

use crate::RrtSimError;

/// Removal times ε_i > 0 for the edges above vertices 2..=n.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeClocks {
    /// eps[i] for i = 2..=n; slots 0 and 1 hold +∞ (the root is never cut).
    eps: Vec<f64>,
}

impl EdgeClocks {
    pub fn from_times(eps: Vec<f64>) -> Result<Self, RrtSimError> {
        if eps.len() < 3 {
            return Err(RrtSimError::TooFewVertices {
                need: 2,
                got: eps.len().saturating_sub(1) as u32,
            });
        }
        for (i, &e) in eps.iter().enumerate().skip(2) {
            assert!(e > 0.0 && e.is_finite(), "clock {i} must be positive finite");
        }
        Ok(EdgeClocks { eps })
    }

    pub fn n(&self) -> u32 {
        (self.eps.len() - 1) as u32
    }

    /// Removal time of the edge above vertex i, 2 ≤ i ≤ n.
    pub fn time(&self, i: u32) -> f64 {
        debug_assert!(i >= 2 && i <= self.n());
        self.eps[i as usize]
    }

    pub fn times(&self) -> &[f64] {
        &self.eps
    }

    pub fn restrict(&self, m: u32) -> Result<EdgeClocks, RrtSimError> {
        if m < 2 || m > self.n() {
            return Err(RrtSimError::VertexOutOfRange { v: m, n: self.n() });
        }
        Ok(EdgeClocks {
            eps: self.eps[..=m as usize].to_vec(),
        })
    }
}

/// Strictly positive unit exponential via inversion; the zero-probability
/// u = 0 draw is rejected so clocks are never 0.
pub(crate) fn exp1<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return -u.ln();
        }
    }
}

/// Draws the n−1 independent Exp(1) clocks.
pub fn gen_clocks<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Result<EdgeClocks, RrtSimError> {
    if n < 2 {
        return Err(RrtSimError::TooFewVertices { need: 2, got: n });
    }
    let mut eps = vec![f64::INFINITY; n as usize + 1];
    for i in 2..=n {
        eps[i as usize] = exp1(rng);
    }
    Ok(EdgeClocks { eps })
}
