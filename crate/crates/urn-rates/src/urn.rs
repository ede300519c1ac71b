//! Pólya-urn sampling of p_k restricted to [n], and the exact rational
//! probability of any given binary outcome.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use partition_core::{Block, Partition};
use rand::Rng;

use crate::UrnRatesError;

/// A p_k sample restricted to [n]: the red labels, always containing the
/// initial red ball k = min(red).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UrnPartition {
    n: u32,
    red: Vec<u32>,
}

impl UrnPartition {
    pub fn n(&self) -> u32 {
        self.n
    }

    /// The initial red label k.
    pub fn k(&self) -> u32 {
        self.red[0]
    }

    pub fn red(&self) -> &[u32] {
        &self.red
    }

    /// Fraction of red balls among the labels {k,…,n}.
    pub fn red_fraction(&self) -> f64 {
        self.red.len() as f64 / (self.n - self.k() + 1) as f64
    }

    /// The induced binary partition of [n]: π₂ = red labels, π₁ the rest.
    pub fn to_partition(&self) -> Partition {
        let red: std::collections::BTreeSet<u32> = self.red.iter().copied().collect();
        let black: Vec<u32> = (1..=self.n).filter(|v| !red.contains(v)).collect();
        let blocks = vec![
            Block::new(black).expect("k >= 2 so vertex 1 is black"),
            Block::new(self.red.clone()).expect("red nonempty"),
        ];
        Partition::from_blocks(self.n, blocks).expect("disjoint cover by construction")
    }
}

/// Draws the p_k partition restricted to [n]: starting from k−1 black balls
/// and the red ball k, each ball m+1 for m = k..n−1 copies the color of a
/// uniform ball among the m present.
pub fn sample_pk<R: Rng + ?Sized>(k: u32, n: u32, rng: &mut R) -> Result<UrnPartition, UrnRatesError> {
    if k < 2 || k > n {
        return Err(UrnRatesError::LabelOutOfRange { k, n });
    }
    let mut red = vec![k];
    let mut red_count = 1u32;
    for m in k..n {
        // ball m+1 joins; urn currently holds m balls
        if rng.random_range(0..m) < red_count {
            red.push(m + 1);
            red_count += 1;
        }
    }
    Ok(UrnPartition { n, red })
}

/// Exact probability that the p_k urn paints exactly the red set π₂ on [n],
/// where k = min π₂: the product over m = k..n−1 of (red or black count)/m
/// according to the color membership of ball m+1.
pub fn pk_prob(pi: &Partition) -> Result<BigRational, UrnRatesError> {
    if pi.num_blocks() != 2 {
        return Err(UrnRatesError::NotBinary {
            blocks: pi.num_blocks(),
        });
    }
    let n = pi.n();
    let red = pi.blocks()[1].elements();
    let k = red[0];
    debug_assert!(k >= 2, "block order puts 1 in the first block");
    let mut prob = BigRational::one();
    let mut red_count = 1u32;
    for m in k..n {
        let is_red = pi.blocks()[1].contains(m + 1);
        let num = if is_red { red_count } else { m - red_count };
        prob *= BigRational::new(BigInt::from(num), BigInt::from(m));
        if is_red {
            red_count += 1;
        }
    }
    Ok(prob)
}

/// Jump rate r_π of the restricted chain: pk_prob for binary partitions,
/// zero for three or more blocks (two simultaneous edge removals never
/// happen), and an error for the neutral partition.
pub fn rate(pi: &Partition) -> Result<BigRational, UrnRatesError> {
    if pi.is_neutral() {
        return Err(UrnRatesError::NeutralPartition);
    }
    if pi.num_blocks() >= 3 {
        return Ok(BigRational::zero());
    }
    pk_prob(pi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn binary(n: u32, red: &[u32]) -> Partition {
        let red_set: std::collections::BTreeSet<u32> = red.iter().copied().collect();
        let labels: Vec<u32> = (1..=n).map(|v| if red_set.contains(&v) { 2 } else { 1 }).collect();
        Partition::from_labels(&labels).unwrap()
    }

    fn rat(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn sample_pk_no_draws_at_n_equals_k() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for k in 2..=6 {
            let s = sample_pk(k, k, &mut rng).unwrap();
            assert_eq!(s.red(), &[k]);
        }
    }

    #[test]
    fn sample_pk_single_draw_frequency() {
        // P(red stays {k}) for n = k+1 is (k−1)/k: first draw picks black.
        let k = 4u32;
        let reps = 100_000;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut stays = 0u32;
        for _ in 0..reps {
            if sample_pk(k, k + 1, &mut rng).unwrap().red().len() == 1 {
                stays += 1;
            }
        }
        let p = (k - 1) as f64 / k as f64;
        let sigma = (p * (1.0 - p) / reps as f64).sqrt();
        let got = stays as f64 / reps as f64;
        assert!((got - p).abs() < 3.0 * sigma, "got {got}, want {p}±{sigma}");
    }

    #[test]
    fn sample_pk_red_fraction_mean_matches_beta() {
        // Red fraction converges to Beta(1, k−1); its mean is 1/k.
        let (k, n, reps) = (3u32, 2000u32, 4000);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut acc = 0.0;
        for _ in 0..reps {
            acc += sample_pk(k, n, &mut rng).unwrap().red_fraction();
        }
        let mean = acc / reps as f64;
        // Var Beta(1,2) = 2/36; allow finite-n drift on top of 3σ.
        let sigma = (2.0f64 / 36.0 / reps as f64).sqrt();
        assert!((mean - 1.0 / 3.0).abs() < 3.0 * sigma + 2.0 / n as f64, "mean {mean}");
    }

    #[test]
    fn sample_pk_deterministic_under_seed() {
        let a = sample_pk(3, 50, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let b = sample_pk(3, 50, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sample_pk_rejects_bad_k() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(sample_pk(1, 5, &mut rng).is_err());
        assert!(sample_pk(6, 5, &mut rng).is_err());
    }

    #[test]
    fn pk_prob_reference_values() {
        // n=2, π₂={2}: empty product.
        assert_eq!(pk_prob(&binary(2, &[2])).unwrap(), rat(1, 1));
        // n=3, π₂={2}: ball 3 black out of (1 black, 1 red).
        assert_eq!(pk_prob(&binary(3, &[2])).unwrap(), rat(1, 2));
        // n=4, π₂={2}: (1/2)·(2/3).
        assert_eq!(pk_prob(&binary(4, &[2])).unwrap(), rat(1, 3));
        // all-red tail: n=4, π₂={2,3,4}: (1/2)·(2/3).
        assert_eq!(pk_prob(&binary(4, &[2, 3, 4])).unwrap(), rat(1, 3));
    }

    #[test]
    fn pk_prob_masses_sum_to_one_per_k() {
        // Σ over red sets with min k of pk_prob = 1, exactly.
        for n in 2..=10u32 {
            for k in 2..=n {
                let mut total = BigRational::zero();
                let tail: Vec<u32> = (k + 1..=n).collect();
                for mask in 0..(1u32 << tail.len()) {
                    let mut red = vec![k];
                    for (i, &v) in tail.iter().enumerate() {
                        if mask >> i & 1 == 1 {
                            red.push(v);
                        }
                    }
                    total += pk_prob(&binary(n, &red)).unwrap();
                }
                assert!(total.is_one(), "n={n} k={k}: {total}");
            }
        }
    }

    #[test]
    fn rate_zero_for_three_blocks_and_err_for_neutral() {
        let three = Partition::from_labels(&[1, 2, 3, 1]).unwrap();
        assert!(rate(&three).unwrap().is_zero());
        assert!(matches!(
            rate(&Partition::neutral(4)),
            Err(UrnRatesError::NeutralPartition)
        ));
        assert_eq!(rate(&binary(2, &[2])).unwrap(), rat(1, 1));
    }
}
