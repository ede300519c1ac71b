//! Exact laws θ_{j,k} of the ordered subtree sizes left after removing j−1
//! uniformly chosen edges from a random recursive tree of size k.
//!
//! Three routes are provided and must agree exactly:
//! - `theta_meir_moon`: the closed form k/(k₂(k₂+1)(k−1)) for j = 2;
//! - `theta_general`: the factorial-prefactor nested-binomial-sum formula for
//!   general j (j = 1 degenerates to the point mass at k, j = 2 to the closed
//!   form above);
//! - `theta_bruteforce`: exhaustive enumeration of every recursive tree on
//!   [k] and every edge subset, the arbiter for k ≤ 9.
//!
//! All values are exact `BigRational`s.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::ExactDistError;

/// A query for θ_{j,k}(k₁,…,k_j): `ks` is a composition of `k` into `j`
/// positive parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaQuery {
    pub j: usize,
    pub k: u64,
    pub ks: Vec<u64>,
}

impl ThetaQuery {
    pub fn new(j: usize, k: u64, ks: Vec<u64>) -> Result<Self, ExactDistError> {
        let q = ThetaQuery { j, k, ks };
        q.validate()?;
        Ok(q)
    }

    fn validate(&self) -> Result<(), ExactDistError> {
        if self.j == 0
            || self.ks.len() != self.j
            || self.k < self.j as u64
            || self.ks.iter().any(|&x| x == 0)
            || self.ks.iter().sum::<u64>() != self.k
        {
            return Err(ExactDistError::InvalidComposition);
        }
        Ok(())
    }
}

fn binom(n: i64, r: u64) -> BigInt {
    if n < 0 || (n as u64) < r {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(r))
}

fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Meir–Moon law of the two subtree sizes after removing one uniform edge:
/// θ_{2,k}(k₁,k₂) = k / (k₂(k₂+1)(k−1)).
pub fn theta_meir_moon(k: u64, k1: u64, k2: u64) -> Result<BigRational, ExactDistError> {
    if k < 2 || k1 == 0 || k2 == 0 || k1 + k2 != k {
        return Err(ExactDistError::InvalidComposition);
    }
    Ok(BigRational::new(
        BigInt::from(k),
        BigInt::from(k2) * BigInt::from(k2 + 1) * BigInt::from(k - 1),
    ))
}

/// General law via the splitting-property count, with j−1 nested sums over
/// the labels 1 < r₂ < ⋯ < r_j of the cut-edge children:
///
/// θ_{j,k}(k₁,…,k_j) = [Π(kᵢ−1)!] / [(k−1)!·C(k−1, j−1)]
///   · Σ_{r₂<⋯<r_j} Π_{m=2}^{j} (r_m − 1)·C(k − S_{m+1} − r_m, k_m − 1),
///
/// where S_{m+1} = Σ_{i>m} kᵢ. Every vertex set with minimum r_m consists of
/// labels ≥ r_m, so the subtree cut at r_m can hang below any of the r_m − 1
/// smaller labels, its remaining k_m − 1 members are drawn from the labels
/// above r_m not consumed by later-rooted subtrees, and the internal tree
/// shapes contribute the factorial prefactor. For j = 1 this is the point
/// mass at k; for j = 2 the sum telescopes to the Meir–Moon closed form.
pub fn theta_general(q: &ThetaQuery) -> Result<BigRational, ExactDistError> {
    q.validate()?;
    let j = q.j;
    let k = q.k;
    if j == 1 {
        return Ok(BigRational::one());
    }
    // suffix[m] = Σ_{i=m}^{j} ks[i-1], 1-based m, suffix[j+1] = 0
    let mut suffix = vec![0u64; j + 2];
    for m in (1..=j).rev() {
        suffix[m] = suffix[m + 1] + q.ks[m - 1];
    }

    // Sum over r_m from m up to min(k − S_m + 1, r_{m+1} − 1); the binomial
    // vanishes past the first bound anyway.
    fn level(m: usize, cap: Option<u64>, k: u64, ks: &[u64], suffix: &[u64]) -> BigInt {
        if m == 1 {
            return BigInt::one();
        }
        let lo = m as u64;
        let mut hi = k - suffix[m] + 1;
        if let Some(c) = cap {
            hi = hi.min(c);
        }
        let mut acc = BigInt::zero();
        let mut r = lo;
        while r <= hi {
            let c = binom(
                k as i64 - suffix[m + 1] as i64 - r as i64,
                ks[m - 1] - 1,
            );
            if !c.is_zero() {
                acc += BigInt::from(r - 1) * c * level(m - 1, Some(r - 1), k, ks, suffix);
            }
            r += 1;
        }
        acc
    }

    let sum = level(j, None, k, &q.ks, &suffix);
    let den = factorial(k - 1) * num_integer::binomial(BigInt::from(k - 1), BigInt::from(j as u64 - 1));
    let mut num = BigInt::one();
    for &ki in &q.ks {
        num *= factorial(ki - 1);
    }
    Ok(BigRational::new(num * sum, den))
}

const BRUTEFORCE_CAP: u64 = 9;

/// Exhaustive oracle: enumerate each of the (k−1)! recursive trees on [k] and
/// each (j−1)-subset of its edges, tally the vector of subtree sizes ordered
/// by root label. Exact rational frequencies; guarded to k ≤ 9.
pub fn theta_bruteforce_table(
    j: usize,
    k: u64,
) -> Result<BTreeMap<Vec<u64>, BigRational>, ExactDistError> {
    if k > BRUTEFORCE_CAP {
        return Err(ExactDistError::EnumerationTooLarge { k, cap: BRUTEFORCE_CAP });
    }
    if j == 0 || (j as u64) > k {
        return Err(ExactDistError::InvalidComposition);
    }
    let k = k as usize;
    let mut counts: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    let mut total: u64 = 0;

    // parents[v] for v = 2..=k, 1-based storage with slot 0 and 1 unused.
    let mut parents = vec![0usize; k + 1];
    for_each_parent_vector(&mut parents, 2, k, &mut |parents| {
        for_each_subset(k - 1, j - 1, &mut |cut| {
            // cut holds 0-based positions into the edge list [2..=k];
            // removed edge child vertices, ascending.
            let mut comp = vec![0usize; k + 1];
            let mut sizes = vec![0u64; j];
            comp[1] = 0;
            sizes[0] = 1;
            let mut next = 1usize;
            let mut cut_iter = cut.iter().peekable();
            for v in 2..=k {
                let is_cut = matches!(cut_iter.peek(), Some(&&c) if c + 2 == v);
                if is_cut {
                    cut_iter.next();
                    comp[v] = next;
                    next += 1;
                } else {
                    comp[v] = comp[parents[v]];
                }
                sizes[comp[v]] += 1;
            }
            *counts.entry(sizes.clone()).or_insert(0) += 1;
            total += 1;
        });
    });

    let total = BigInt::from(total);
    Ok(counts
        .into_iter()
        .map(|(sizes, c)| (sizes, BigRational::new(BigInt::from(c), total.clone())))
        .collect())
}

/// Single-composition view of the brute-force table.
pub fn theta_bruteforce(q: &ThetaQuery) -> Result<BigRational, ExactDistError> {
    q.validate()?;
    let table = theta_bruteforce_table(q.j, q.k)?;
    Ok(table.get(&q.ks).cloned().unwrap_or_else(BigRational::zero))
}

fn for_each_parent_vector(
    parents: &mut Vec<usize>,
    v: usize,
    k: usize,
    f: &mut impl FnMut(&[usize]),
) {
    if v > k {
        f(parents);
        return;
    }
    for u in 1..v {
        parents[v] = u;
        for_each_parent_vector(parents, v + 1, k, f);
    }
}

fn for_each_subset(n: usize, r: usize, f: &mut impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..r).collect();
    if r == 0 {
        f(&idx);
        return;
    }
    if r > n {
        return;
    }
    loop {
        f(&idx);
        // next combination in lexicographic order
        let mut i = r;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - r {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for m in i + 1..r {
            idx[m] = idx[m - 1] + 1;
        }
    }
}

/// All compositions of `k` into `j` positive parts, lexicographic.
pub fn compositions(k: u64, j: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = vec![0u64; j];
    fn rec(k: u64, j: usize, pos: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if pos + 1 == j {
            cur[pos] = k;
            out.push(cur.clone());
            return;
        }
        let remaining_parts = (j - pos - 1) as u64;
        for v in 1..=(k - remaining_parts) {
            cur[pos] = v;
            rec(k - v, j, pos + 1, cur, out);
        }
    }
    if j >= 1 && k >= j as u64 {
        rec(k, j, 0, &mut cur, &mut out);
    }
    out
}
