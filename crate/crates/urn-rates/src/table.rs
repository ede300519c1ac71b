//! Exact rate table for the first jump of the restricted chain on [n]: every
//! binary partition of [n] with its rational rate. The table total is n−1
//! exactly, one unit of rate per removable edge.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use partition_core::Partition;
use serde::{Deserialize, Serialize};

use crate::urn::pk_prob;
use crate::UrnRatesError;

const LEVEL_MIN: u32 = 2;
const LEVEL_MAX: u32 = 12;

/// One binary partition of [n], keyed by its second block, with an exact
/// rational rate. Serialized as {"pi2": […], "num": …, "den": …}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RateEntry {
    pub pi2: Vec<u32>,
    pub num: u64,
    pub den: u64,
}

impl RateEntry {
    pub fn rate(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(self.den))
    }

    pub fn rate_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// All jump rates out of the unbroken state 1_[n], n capped at 12 to keep the
/// 2^{n−1}−1 entries enumerable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RateTable {
    pub n: u32,
    pub entries: Vec<RateEntry>,
    pub total_num: u64,
    pub total_den: u64,
}

impl RateTable {
    /// Enumerates binary partitions as (k, subset of {k+1..n}) pairs, k being
    /// the red label, and attaches the exact urn probability to each.
    pub fn build(n: u32) -> Result<Self, UrnRatesError> {
        if !(LEVEL_MIN..=LEVEL_MAX).contains(&n) {
            return Err(UrnRatesError::LevelOutOfRange {
                n,
                lo: LEVEL_MIN,
                hi: LEVEL_MAX,
            });
        }
        let mut entries = Vec::new();
        let mut total = BigRational::zero();
        for k in 2..=n {
            let tail: Vec<u32> = (k + 1..=n).collect();
            for mask in 0..(1u64 << tail.len()) {
                let mut pi2 = vec![k];
                for (i, &v) in tail.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        pi2.push(v);
                    }
                }
                let rate = pk_prob(&binary_partition(n, &pi2))?;
                total += &rate;
                entries.push(RateEntry {
                    num: rational_u64(rate.numer()),
                    den: rational_u64(rate.denom()),
                    pi2,
                });
            }
        }
        entries.sort_by(|a, b| a.pi2.cmp(&b.pi2));
        Ok(RateTable {
            n,
            entries,
            total_num: rational_u64(total.numer()),
            total_den: rational_u64(total.denom()),
        })
    }

    pub fn total(&self) -> BigRational {
        BigRational::new(BigInt::from(self.total_num), BigInt::from(self.total_den))
    }

    /// Looks up the rate of the binary partition with the given second block.
    pub fn rate_of(&self, pi2: &[u32]) -> Option<BigRational> {
        self.entries
            .binary_search_by(|e| e.pi2.as_slice().cmp(pi2))
            .ok()
            .map(|i| self.entries[i].rate())
    }
}

fn rational_u64(x: &BigInt) -> u64 {
    x.to_u64().expect("rate numerators/denominators fit u64 for n <= 12")
}

/// The binary partition of [n] whose second block is `pi2`.
pub(crate) fn binary_partition(n: u32, pi2: &[u32]) -> Partition {
    let red: std::collections::BTreeSet<u32> = pi2.iter().copied().collect();
    let labels: Vec<u32> = (1..=n)
        .map(|v| if red.contains(&v) { 2 } else { 1 })
        .collect();
    Partition::from_labels(&labels).expect("nonempty complement since 1 is black")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn level_two_is_the_single_unit_rate() {
        let table = RateTable::build(2).unwrap();
        assert_eq!(table.entries.len(), 1);
        assert_eq!(table.entries[0].pi2, vec![2]);
        assert_eq!(table.entries[0].rate(), BigRational::one());
        assert_eq!(table.total(), BigRational::one());
    }

    #[test]
    fn level_three_rates() {
        let table = RateTable::build(3).unwrap();
        let r = |pi2: &[u32]| table.rate_of(pi2).unwrap();
        assert_eq!(r(&[2]), BigRational::new(1.into(), 2.into()));
        assert_eq!(r(&[2, 3]), BigRational::new(1.into(), 2.into()));
        assert_eq!(r(&[3]), BigRational::one());
        assert_eq!(table.total(), BigRational::from(BigInt::from(2)));
    }

    #[test]
    fn totals_are_n_minus_one_exactly() {
        for n in 2..=12u32 {
            let table = RateTable::build(n).unwrap();
            assert_eq!(
                table.total(),
                BigRational::from(BigInt::from(n - 1)),
                "n = {n}"
            );
            assert_eq!(table.entries.len(), (1usize << (n - 1)) - 1);
        }
    }

    #[test]
    fn guard_rejects_out_of_range() {
        assert!(RateTable::build(1).is_err());
        assert!(RateTable::build(13).is_err());
    }

    #[test]
    fn json_schema_round_trip() {
        let table = RateTable::build(4).unwrap();
        let json = serde_json::to_string(&table).unwrap();
        assert!(json.contains("\"pi2\""));
        assert!(json.contains("\"total_num\":3"));
        assert!(json.contains("\"total_den\":1"));
        let back: RateTable = serde_json::from_str(&json).unwrap();
        assert_eq!(back, table);
    }
}
