//! Partitions of `[n] = {1, …, n}` with blocks indexed in increasing order of
//! their smallest elements, together with the fragmentation operators that act
//! on them:
//!
//! - `restrict`: π ↦ π|[m], intersecting every block with `[m]`;
//! - `compose_block`: (B, π) ↦ B∘π, the partition of a vertex set B obtained
//!   by enumerating B in increasing order and splitting along π;
//! - `fragment_at`: replace the i-th block of η by η_i∘π;
//! - `fragment_all`: split every block of η by its own partition.
//!
//! Restriction commutes with fragmentation:
//! `restrict(fragment_all(η, πs), m) == fragment_all(restrict(η, m), restrict πs)`,
//! which is what makes the restricted chains consistent as n varies. This is
//! checked exhaustively for small n in the tests.
//!
//! All values are plain owned data; every operation is side-effect-free.

use std::fmt;

use thiserror::Error;

/// Errors raised by partition constructors and operators.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("ground-set size must be positive")]
    EmptyGroundSet,
    #[error("blocks do not form a partition of [{0}]")]
    NotAPartition(u32),
    #[error("blocks must be indexed by increasing least element")]
    BlocksOutOfOrder,
    #[error("restriction level {m} out of range 1..={n}")]
    RestrictionOutOfRange { m: u32, n: u32 },
    #[error("partition ground set {have} smaller than required {need}")]
    GroundSetTooSmall { have: u32, need: u32 },
    #[error("block index {index} out of range for {blocks} blocks")]
    BlockIndexOutOfRange { index: usize, blocks: usize },
    #[error("expected one partition per block ({blocks}), got {given}")]
    LengthMismatch { blocks: usize, given: usize },
}

/// A nonempty set of vertices in strictly increasing order.
///
/// `B(j)`, the j-th smallest element, is simply `elements()[j-1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    elements: Vec<u32>,
}

impl Block {
    /// Builds a block from vertices in any order; duplicates are rejected by
    /// the strictly-increasing invariant.
    pub fn new(mut elements: Vec<u32>) -> Option<Self> {
        if elements.is_empty() {
            return None;
        }
        elements.sort_unstable();
        if elements.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some(Block { elements })
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Smallest element of the block, i.e. B(1).
    pub fn least(&self) -> u32 {
        self.elements[0]
    }

    /// The j-th smallest element, 1-based, i.e. B(j).
    pub fn nth(&self, j: usize) -> u32 {
        self.elements[j - 1]
    }

    pub fn contains(&self, v: u32) -> bool {
        self.elements.binary_search(&v).is_ok()
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// A partition of `[n]` into disjoint nonempty blocks covering `{1, …, n}`,
/// indexed in increasing order of their smallest elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    n: u32,
    blocks: Vec<Block>,
}

impl Partition {
    /// Validating constructor: blocks must be disjoint, cover `[n]` and be
    /// listed in increasing order of their minima.
    pub fn from_blocks(n: u32, blocks: Vec<Block>) -> Result<Self, PartitionError> {
        if n == 0 {
            return Err(PartitionError::EmptyGroundSet);
        }
        let mut seen = vec![false; n as usize + 1];
        let mut count = 0usize;
        for b in &blocks {
            for &v in b.elements() {
                if v == 0 || v > n || seen[v as usize] {
                    return Err(PartitionError::NotAPartition(n));
                }
                seen[v as usize] = true;
                count += 1;
            }
        }
        if count != n as usize {
            return Err(PartitionError::NotAPartition(n));
        }
        if blocks.windows(2).any(|w| w[0].least() >= w[1].least()) {
            return Err(PartitionError::BlocksOutOfOrder);
        }
        Ok(Partition { n, blocks })
    }

    /// The neutral partition 1_[n] with the single block `[n]`.
    pub fn neutral(n: u32) -> Self {
        let block = Block::new((1..=n).collect()).expect("n >= 1");
        Partition {
            n,
            blocks: vec![block],
        }
    }

    /// The partition of `[n]` into singletons.
    pub fn singletons(n: u32) -> Self {
        Partition {
            n,
            blocks: (1..=n).map(|v| Block { elements: vec![v] }).collect(),
        }
    }

    /// Builds a partition from a per-vertex label map (`labels[v-1]` is the
    /// label of vertex v). Labels are only used for grouping; blocks come out
    /// ordered by least element regardless of the label values.
    pub fn from_labels(labels: &[u32]) -> Result<Self, PartitionError> {
        let n = labels.len() as u32;
        if n == 0 {
            return Err(PartitionError::EmptyGroundSet);
        }
        let mut order: Vec<u32> = Vec::new();
        let mut index_of: std::collections::HashMap<u32, usize> = std::collections::HashMap::new();
        let mut blocks: Vec<Vec<u32>> = Vec::new();
        for (i, &lab) in labels.iter().enumerate() {
            let v = i as u32 + 1;
            let idx = *index_of.entry(lab).or_insert_with(|| {
                order.push(lab);
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[idx].push(v);
        }
        // First occurrence order is least-element order since vertices are
        // scanned ascending.
        let blocks = blocks
            .into_iter()
            .map(|els| Block { elements: els })
            .collect();
        Ok(Partition { n, blocks })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Block index (0-based) holding vertex v, by linear scan.
    pub fn block_of(&self, v: u32) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(v))
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len()).collect()
    }

    pub fn is_neutral(&self) -> bool {
        self.blocks.len() == 1
    }

    /// Restriction π|[m]: intersect every block with `[m]`, drop empties,
    /// reorder by least element.
    pub fn restrict(&self, m: u32) -> Result<Partition, PartitionError> {
        if m == 0 || m > self.n {
            return Err(PartitionError::RestrictionOutOfRange { m, n: self.n });
        }
        let mut blocks: Vec<Block> = self
            .blocks
            .iter()
            .filter_map(|b| {
                let els: Vec<u32> = b.elements().iter().copied().filter(|&v| v <= m).collect();
                if els.is_empty() {
                    None
                } else {
                    Some(Block { elements: els })
                }
            })
            .collect();
        // Intersection preserves relative minima of surviving blocks, but we
        // sort anyway to keep the invariant explicit.
        blocks.sort_by_key(|b| b.least());
        Ok(Partition { n: m, blocks })
    }

    /// Splits every block of `self` by the corresponding entry of `pis` and
    /// reorders the resulting blocks by least element.
    pub fn fragment_all(&self, pis: &[Partition]) -> Result<Partition, PartitionError> {
        if pis.len() != self.blocks.len() {
            return Err(PartitionError::LengthMismatch {
                blocks: self.blocks.len(),
                given: pis.len(),
            });
        }
        let mut blocks: Vec<Block> = Vec::new();
        for (b, pi) in self.blocks.iter().zip(pis) {
            blocks.extend(compose_block(b, pi)?.blocks);
        }
        blocks.sort_by_key(|b| b.least());
        Ok(Partition { n: self.n, blocks })
    }

    /// Replaces the i-th block (0-based) of `self` by its fragmentation along
    /// `pi`, reordering by least element.
    pub fn fragment_at(&self, i: usize, pi: &Partition) -> Result<Partition, PartitionError> {
        if i >= self.blocks.len() {
            return Err(PartitionError::BlockIndexOutOfRange {
                index: i,
                blocks: self.blocks.len(),
            });
        }
        let mut blocks: Vec<Block> = Vec::new();
        for (j, b) in self.blocks.iter().enumerate() {
            if j == i {
                blocks.extend(compose_block(b, pi)?.blocks);
            } else {
                blocks.push(b.clone());
            }
        }
        blocks.sort_by_key(|b| b.least());
        Ok(Partition { n: self.n, blocks })
    }
}

impl fmt::Display for Partition {
    /// Canonical text form: blocks as brace lists ordered by minimum,
    /// e.g. `{1,3}{2}{4}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// B∘π: the partition of the vertex set `block` generated by the blocks
/// `B(π_i) = {B(j): j ∈ π_i}`, i.e. `block` enumerated in increasing order and
/// split along π. `pi` may live on a larger ground set, in which case only its
/// restriction to `[|B|]` matters.
pub fn compose_block(block: &Block, pi: &Partition) -> Result<Partition, PartitionError> {
    let k = block.len() as u32;
    if pi.n() < k {
        return Err(PartitionError::GroundSetTooSmall {
            have: pi.n(),
            need: k,
        });
    }
    let pi = if pi.n() == k {
        pi.clone()
    } else {
        pi.restrict(k)?
    };
    let blocks: Vec<Block> = pi
        .blocks
        .iter()
        .map(|pb| Block {
            elements: pb.elements().iter().map(|&j| block.nth(j as usize)).collect(),
        })
        .collect();
    // Enumeration is monotone, so least-element order carries over from pi.
    Partition::from_blocks_of_set(blocks)
}

impl Partition {
    /// Internal: partition of an arbitrary vertex set (used by B∘π, whose
    /// ground set is the block B rather than an interval). The `n` recorded is
    /// the largest vertex, which is only used for consistency checks by
    /// callers that re-embed the blocks into a partition of [n].
    fn from_blocks_of_set(mut blocks: Vec<Block>) -> Result<Partition, PartitionError> {
        blocks.sort_by_key(|b| b.least());
        let n = blocks
            .iter()
            .flat_map(|b| b.elements().iter().copied())
            .max()
            .ok_or(PartitionError::EmptyGroundSet)?;
        Ok(Partition { n, blocks })
    }
}

/// Enumerates every partition of `[n]` via restricted growth strings; blocks
/// come out in least-element order by construction. Intended for exhaustive
/// small-n checks (Bell(12) ≈ 4.2M is the practical ceiling).
pub fn enumerate_partitions(n: u32) -> Vec<Partition> {
    assert!(n >= 1, "enumerate_partitions requires n >= 1");
    let n = n as usize;
    let mut out = Vec::new();
    // rgs[v] = block index of vertex v+1; rgs[v] <= max(rgs[..v]) + 1.
    let mut rgs = vec![0u32; n];
    loop {
        out.push(Partition::from_labels(&rgs.iter().map(|&x| x + 1).collect::<Vec<_>>()).unwrap());
        // Advance to the next restricted growth string.
        let mut v = n - 1;
        loop {
            if v == 0 {
                return out;
            }
            let cap = rgs[..v].iter().copied().max().unwrap_or(0) + 1;
            if rgs[v] < cap {
                rgs[v] += 1;
                for x in rgs[v + 1..].iter_mut() {
                    *x = 0;
                }
                break;
            }
            v -= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32, blocks: &[&[u32]]) -> Partition {
        Partition::from_blocks(
            n,
            blocks
                .iter()
                .map(|b| Block::new(b.to_vec()).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn display_canonical_form() {
        let pi = p(4, &[&[1, 3], &[2], &[4]]);
        assert_eq!(pi.to_string(), "{1,3}{2}{4}");
    }

    #[test]
    fn restrict_drops_and_reorders() {
        // ({1,4},{2,5},{3}) restricted to [3] is ({1},{2},{3}).
        let pi = p(5, &[&[1, 4], &[2, 5], &[3]]);
        let r = pi.restrict(3).unwrap();
        assert_eq!(r, p(3, &[&[1], &[2], &[3]]));
    }

    #[test]
    fn restrict_neutral_and_identity() {
        for n in 1..=6 {
            for m in 1..=n {
                assert_eq!(Partition::neutral(n).restrict(m).unwrap(), Partition::neutral(m));
            }
            let singles = Partition::singletons(n);
            assert_eq!(singles.restrict(n).unwrap(), singles);
        }
        let pi = p(4, &[&[1, 3], &[2, 4]]);
        assert_eq!(pi.restrict(4).unwrap(), pi);
    }

    #[test]
    fn restrict_out_of_range() {
        let pi = Partition::neutral(3);
        assert!(matches!(
            pi.restrict(0),
            Err(PartitionError::RestrictionOutOfRange { .. })
        ));
        assert!(matches!(
            pi.restrict(4),
            Err(PartitionError::RestrictionOutOfRange { .. })
        ));
    }

    #[test]
    fn compose_block_enumerates() {
        // B = {2,5,7}, pi = ({1,3},{2})  =>  ({2,7},{5})
        let b = Block::new(vec![2, 5, 7]).unwrap();
        let pi = p(3, &[&[1, 3], &[2]]);
        let c = compose_block(&b, &pi).unwrap();
        assert_eq!(c.blocks().len(), 2);
        assert_eq!(c.blocks()[0].elements(), &[2, 7]);
        assert_eq!(c.blocks()[1].elements(), &[5]);
    }

    #[test]
    fn compose_block_identity_and_neutral() {
        // B = [k] acts as the identity enumeration.
        let b = Block::new((1..=4).collect()).unwrap();
        let pi = p(4, &[&[1, 4], &[2], &[3]]);
        assert_eq!(compose_block(&b, &pi).unwrap(), pi);
        // The neutral partition keeps B whole.
        let b = Block::new(vec![3, 6, 9]).unwrap();
        let c = compose_block(&b, &Partition::neutral(3)).unwrap();
        assert_eq!(c.blocks().len(), 1);
        assert_eq!(c.blocks()[0].elements(), &[3, 6, 9]);
    }

    #[test]
    fn compose_block_larger_ground_set() {
        // pi on [5] applied to a 3-element block uses pi|[3].
        let b = Block::new(vec![1, 2, 4]).unwrap();
        let pi = p(5, &[&[1, 3, 5], &[2, 4]]);
        let c = compose_block(&b, &pi).unwrap();
        assert_eq!(c.blocks()[0].elements(), &[1, 4]);
        assert_eq!(c.blocks()[1].elements(), &[2]);
    }

    #[test]
    fn compose_block_too_small_errors() {
        let b = Block::new(vec![1, 2, 4]).unwrap();
        assert!(matches!(
            compose_block(&b, &Partition::neutral(2)),
            Err(PartitionError::GroundSetTooSmall { .. })
        ));
    }

    #[test]
    fn fragment_at_splits_and_reorders() {
        // η = ({1,2,3},{4}), fragment block 0 by ({1,3},{2}) => ({1,3},{2},{4})
        let eta = p(4, &[&[1, 2, 3], &[4]]);
        let pi = p(3, &[&[1, 3], &[2]]);
        let got = eta.fragment_at(0, &pi).unwrap();
        assert_eq!(got, p(4, &[&[1, 3], &[2], &[4]]));
    }

    #[test]
    fn fragment_at_singleton_is_noop() {
        let eta = p(4, &[&[1, 2, 3], &[4]]);
        let got = eta.fragment_at(1, &Partition::neutral(5)).unwrap();
        assert_eq!(got, eta);
    }

    #[test]
    fn fragment_at_neutral_matches_compose() {
        let eta = Partition::neutral(5);
        let pi = p(5, &[&[1, 4], &[2, 5], &[3]]);
        let lhs = eta.fragment_at(0, &pi).unwrap();
        let rhs = compose_block(&Block::new((1..=5).collect()).unwrap(), &pi).unwrap();
        assert_eq!(lhs.blocks(), rhs.blocks());
    }

    #[test]
    fn fragment_at_bad_index() {
        let eta = p(4, &[&[1, 2, 3], &[4]]);
        assert!(matches!(
            eta.fragment_at(2, &Partition::neutral(4)),
            Err(PartitionError::BlockIndexOutOfRange { .. })
        ));
    }

    #[test]
    fn fragment_all_neutral_is_identity() {
        let eta = p(5, &[&[1, 4], &[2, 5], &[3]]);
        let pis: Vec<Partition> = eta
            .blocks()
            .iter()
            .map(|b| Partition::neutral(b.len() as u32))
            .collect();
        assert_eq!(eta.fragment_all(&pis).unwrap(), eta);
    }

    #[test]
    fn fragment_all_length_mismatch() {
        let eta = p(4, &[&[1, 2], &[3, 4]]);
        assert!(matches!(
            eta.fragment_all(&[Partition::neutral(2)]),
            Err(PartitionError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn fragment_preserves_ground_set_and_order() {
        let eta = p(6, &[&[1, 3, 5], &[2, 6], &[4]]);
        let pis = vec![
            p(3, &[&[1], &[2, 3]]),
            p(2, &[&[1], &[2]]),
            Partition::neutral(1),
        ];
        let got = eta.fragment_all(&pis).unwrap();
        let mut all: Vec<u32> = got
            .blocks()
            .iter()
            .flat_map(|b| b.elements().iter().copied())
            .collect();
        all.sort_unstable();
        assert_eq!(all, (1..=6).collect::<Vec<_>>());
        for w in got.blocks().windows(2) {
            assert!(w[0].least() < w[1].least());
        }
    }

    #[test]
    fn compose_block_size_multiset_matches_pi() {
        let b = Block::new(vec![2, 3, 5, 8, 13]).unwrap();
        let pi = p(7, &[&[1, 4, 6], &[2, 7], &[3, 5]]);
        let c = compose_block(&b, &pi).unwrap();
        let mut got: Vec<usize> = c.blocks().iter().map(|x| x.len()).collect();
        let mut want: Vec<usize> = pi.restrict(5).unwrap().block_sizes();
        got.sort_unstable();
        want.sort_unstable();
        assert_eq!(got, want);
    }

    #[test]
    fn enumerate_matches_bell_numbers() {
        let bell = [1usize, 1, 2, 5, 15, 52, 203, 877];
        for n in 1..=7u32 {
            assert_eq!(enumerate_partitions(n).len(), bell[n as usize]);
        }
    }

    #[test]
    fn from_labels_least_element_order() {
        // labels: vertex -> arbitrary ids; blocks must come back min-ordered.
        let pi = Partition::from_labels(&[7, 7, 3, 9, 3]).unwrap();
        assert_eq!(pi.to_string(), "{1,2}{3,5}{4}");
    }
}
