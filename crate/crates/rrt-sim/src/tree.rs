//! Uniform random recursive trees, stored as a parent array indexed 1..=n.

use rand::Rng;

use crate::RrtSimError;

/// A recursive tree on {1,…,n}: vertex i ≥ 2 hangs below parent(i) < i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecursiveTree {
    /// parent[i] for i = 2..=n; slots 0 and 1 are unused sentinels.
    parent: Vec<u32>,
}

impl RecursiveTree {
    pub fn from_parents(parent: Vec<u32>) -> Result<Self, RrtSimError> {
        if parent.len() < 2 {
            return Err(RrtSimError::TooFewVertices {
                need: 1,
                got: parent.len().saturating_sub(1) as u32,
            });
        }
        for (i, &u) in parent.iter().enumerate().skip(2) {
            assert!(
                u >= 1 && (u as usize) < i,
                "parent of {i} must lie in 1..{i}, got {u}"
            );
        }
        Ok(RecursiveTree { parent })
    }

    pub fn n(&self) -> u32 {
        (self.parent.len() - 1) as u32
    }

    /// Parent of vertex i, for 2 ≤ i ≤ n.
    pub fn parent_of(&self, i: u32) -> u32 {
        debug_assert!(i >= 2 && i <= self.n());
        self.parent[i as usize]
    }

    pub fn parents(&self) -> &[u32] {
        &self.parent
    }

    /// The restriction to [m] is again a recursive tree on [m].
    pub fn restrict(&self, m: u32) -> Result<RecursiveTree, RrtSimError> {
        if m < 1 || m > self.n() {
            return Err(RrtSimError::VertexOutOfRange { v: m, n: self.n() });
        }
        Ok(RecursiveTree {
            parent: self.parent[..=m as usize].to_vec(),
        })
    }
}

/// Draws a uniform recursive tree: parent(i) uniform on {1,…,i−1},
/// independently across i. Deterministic given the generator state.
pub fn gen_tree<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Result<RecursiveTree, RrtSimError> {
    if n < 1 {
        return Err(RrtSimError::TooFewVertices { need: 1, got: n });
    }
    let mut parent = vec![0u32; n as usize + 1];
    for i in 2..=n {
        parent[i as usize] = rng.random_range(1..i);
    }
    Ok(RecursiveTree { parent })
}

/// Number of vertices in the subtree rooted at i (descendants carry larger
/// labels, so one descending pass of counts suffices).
pub fn subtree_size(tree: &RecursiveTree, i: u32) -> Result<u64, RrtSimError> {
    let n = tree.n();
    if i < 1 || i > n {
        return Err(RrtSimError::VertexOutOfRange { v: i, n });
    }
    let mut count = vec![1u64; n as usize + 1];
    for v in (i.max(2)..=n).rev() {
        let u = tree.parent_of(v);
        if u >= i {
            count[u as usize] += count[v as usize];
        }
    }
    Ok(count[i as usize])
}
