//! Root-cluster trajectory and jump statistics.
//!
//! The whole trajectory of the root cluster comes from one pass: the path
//! minimum m_i of the clocks between i and the root decides membership at
//! every t simultaneously (i is in the root cluster at t iff m_i > t). The
//! jump history is recovered in reverse time: starting from the partition at
//! the horizon, edges are re-inserted in decreasing clock order and merges
//! into the root component are recorded with a union-find structure.

use rand::Rng;

use crate::clocks::EdgeClocks;
use crate::tree::RecursiveTree;
use crate::unionfind::UnionFind;
use crate::{normalized_weight, RrtSimError};

/// One multiplicative drop of the root-cluster weight: at `time`, the log
/// weight fell by `log_drop` < 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpRecord {
    pub time: f64,
    pub log_drop: f64,
}

/// Root-cluster weight along an ascending time grid, all points coupled
/// through the same clocks. Sizes are non-increasing along the grid; each
/// grid point is renormalized with its own exponent e^{−t}.
pub fn root_weight_path(
    tree: &RecursiveTree,
    clocks: &EdgeClocks,
    t_grid: &[f64],
) -> Result<Vec<(f64, f64)>, RrtSimError> {
    if t_grid.windows(2).any(|w| w[0] > w[1]) || t_grid.iter().any(|&t| t < 0.0) {
        return Err(RrtSimError::UnsortedGrid);
    }
    let n = tree.n();
    let sizes = root_sizes_on_grid(tree, clocks, t_grid);
    Ok(t_grid
        .iter()
        .zip(sizes)
        .map(|(&t, s)| (t, normalized_weight(n as u64, t, s)))
        .collect())
}

/// Root-cluster sizes at each grid point via the path-minimum pass.
pub fn root_sizes_on_grid(tree: &RecursiveTree, clocks: &EdgeClocks, t_grid: &[f64]) -> Vec<u64> {
    let n = tree.n();
    // hist[g] counts vertices whose path minimum falls in (t_{g−1}, t_g];
    // the suffix sum beyond g is the cluster size at t_g.
    let mut hist = vec![0u64; t_grid.len() + 1];
    let mut min_clock = vec![f64::INFINITY; n as usize + 1];
    for i in 2..=n {
        let m = clocks.time(i).min(min_clock[tree.parent_of(i) as usize]);
        min_clock[i as usize] = m;
        hist[t_grid.partition_point(|&t| t < m)] += 1;
    }
    // vertex 1 is always in its own cluster
    let mut acc = 1u64;
    let mut sizes = vec![0u64; t_grid.len()];
    for g in (0..t_grid.len()).rev() {
        acc += hist[g + 1];
        sizes[g] = acc;
    }
    sizes
}

/// Jump history of the root-cluster weight over [0, horizon]: for every edge
/// removal that splits the current root cluster, the time and the log of the
/// size ratio (always strictly negative). Reverse-time processing: edges
/// surviving past the horizon are united first, then the removed edges are
/// re-inserted in decreasing clock order while a union-find tracks component
/// sizes and the component holding the root.
pub fn root_jump_magnitudes(
    tree: &RecursiveTree,
    clocks: &EdgeClocks,
    horizon: f64,
) -> Result<Vec<JumpRecord>, RrtSimError> {
    let mut scratch = JumpScratch::new();
    root_jump_magnitudes_with(tree, clocks, horizon, &mut scratch)
}

/// Reusable buffers for [`root_jump_magnitudes_with`]; batching replicas
/// through one scratch avoids re-allocating the union-find and edge arrays.
#[derive(Debug)]
pub struct JumpScratch {
    uf: UnionFind,
    removed: Vec<(f64, u32)>,
}

impl JumpScratch {
    pub fn new() -> Self {
        JumpScratch {
            uf: UnionFind::new(0),
            removed: Vec::new(),
        }
    }
}

impl Default for JumpScratch {
    fn default() -> Self {
        Self::new()
    }
}

/// See [`root_jump_magnitudes`]; identical output, caller-owned scratch.
pub fn root_jump_magnitudes_with(
    tree: &RecursiveTree,
    clocks: &EdgeClocks,
    horizon: f64,
    scratch: &mut JumpScratch,
) -> Result<Vec<JumpRecord>, RrtSimError> {
    if horizon < 0.0 {
        return Err(RrtSimError::UnsortedGrid);
    }
    let n = tree.n();
    let uf = &mut scratch.uf;
    uf.reset(n);
    let removed = &mut scratch.removed;
    removed.clear();
    for i in 2..=n {
        let e = clocks.time(i);
        if e > horizon {
            uf.union(i, tree.parent_of(i));
        } else {
            removed.push((e, i));
        }
    }
    removed.sort_unstable_by(|a, b| b.0.total_cmp(&a.0));

    let mut root_comp = uf.find(1);
    let mut jumps: Vec<JumpRecord> = Vec::with_capacity(64);
    for &(e, i) in removed.iter() {
        let ra = uf.find(i);
        let rb = uf.find(tree.parent_of(i));
        debug_assert_ne!(ra, rb, "tree edges never close a cycle");
        let merged_root_cluster = ra == root_comp || rb == root_comp;
        if merged_root_cluster {
            let kept = uf.size_of_root(root_comp) as f64;
            let merged = kept + uf.size_of_root(if ra == root_comp { rb } else { ra }) as f64;
            jumps.push(JumpRecord {
                time: e,
                log_drop: (kept / merged).ln(),
            });
        }
        let new_root = uf.union(ra, rb).expect("distinct components");
        if merged_root_cluster {
            root_comp = new_root;
        }
    }
    jumps.reverse();
    Ok(jumps)
}

/// The first jump of the restricted chain on [n] from the unbroken state:
/// the time is the minimum clock, the new state is the binary partition cut
/// by that edge. Returns (time, second block of the partition).
pub fn first_jump(tree: &RecursiveTree, clocks: &EdgeClocks) -> (f64, Vec<u32>) {
    let n = tree.n();
    let mut argmin = 2u32;
    let mut best = clocks.time(2);
    for i in 3..=n {
        let e = clocks.time(i);
        if e < best {
            best = e;
            argmin = i;
        }
    }
    // second block = subtree below the removed edge
    let mut in_sub = vec![false; n as usize + 1];
    in_sub[argmin as usize] = true;
    let mut pi2 = vec![argmin];
    for j in argmin + 1..=n {
        if in_sub[tree.parent_of(j) as usize] {
            in_sub[j as usize] = true;
            pi2.push(j);
        }
    }
    (best, pi2)
}

/// Convenience draw of a (tree, clocks) pair from one stream.
pub fn gen_tree_and_clocks<R: Rng + ?Sized>(
    n: u32,
    rng: &mut R,
) -> Result<(RecursiveTree, EdgeClocks), RrtSimError> {
    let tree = crate::tree::gen_tree(n, rng)?;
    let clocks = crate::clocks::gen_clocks(n, rng)?;
    Ok((tree, clocks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::clusters_at;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trivial_grid_at_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (tree, clocks) = gen_tree_and_clocks(100, &mut rng).unwrap();
        let path = root_weight_path(&tree, &clocks, &[0.0]).unwrap();
        assert_eq!(path, vec![(0.0, 1.0)]);
    }

    #[test]
    fn grid_sizes_match_snapshots_and_decrease() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (tree, clocks) = gen_tree_and_clocks(500, &mut rng).unwrap();
        let grid = [0.0, 0.2, 0.5, 0.9, 1.7, 3.0];
        let sizes = root_sizes_on_grid(&tree, &clocks, &grid);
        for (g, &t) in grid.iter().enumerate() {
            let snap = clusters_at(&tree, &clocks, t);
            assert_eq!(sizes[g], snap.sizes()[0], "t = {t}");
        }
        assert!(sizes.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn unsorted_grid_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (tree, clocks) = gen_tree_and_clocks(10, &mut rng).unwrap();
        assert!(root_weight_path(&tree, &clocks, &[0.5, 0.1]).is_err());
    }

    #[test]
    fn no_removals_no_jumps() {
        let tree = RecursiveTree::from_parents(vec![0, 0, 1, 2]).unwrap();
        let clocks = EdgeClocks::from_times(vec![f64::INFINITY, f64::INFINITY, 5.0, 6.0]).unwrap();
        assert!(root_jump_magnitudes(&tree, &clocks, 1.0).unwrap().is_empty());
    }

    #[test]
    fn jumps_match_forward_resimulation() {
        // oracle: walk the removal times in order and diff the root-cluster
        // sizes from fresh snapshots
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let (tree, clocks) = gen_tree_and_clocks(200, &mut rng).unwrap();
            let horizon = 1.0;
            let jumps = root_jump_magnitudes(&tree, &clocks, horizon).unwrap();

            let mut events: Vec<f64> = clocks.times()[2..]
                .iter()
                .copied()
                .filter(|&e| e <= horizon)
                .collect();
            events.sort_by(f64::total_cmp);
            let mut expected = Vec::new();
            let mut prev = clusters_at(&tree, &clocks, 0.0).sizes()[0];
            for &e in &events {
                let cur = clusters_at(&tree, &clocks, e).sizes()[0];
                if cur < prev {
                    expected.push((e, (cur as f64 / prev as f64).ln()));
                }
                prev = cur;
            }
            assert_eq!(jumps.len(), expected.len());
            for (j, (te, de)) in jumps.iter().zip(expected) {
                assert_eq!(j.time, te);
                assert!((j.log_drop - de).abs() < 1e-12);
                assert!(j.log_drop < 0.0);
            }
            // chronological order
            assert!(jumps.windows(2).all(|w| w[0].time <= w[1].time));
        }
    }

    #[test]
    fn first_jump_matches_min_clock_split() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let (tree, clocks) = gen_tree_and_clocks(6, &mut rng).unwrap();
            let (time, pi2) = first_jump(&tree, &clocks);
            let snap = clusters_at(&tree, &clocks, time);
            assert_eq!(snap.num_clusters(), 2);
            let second: Vec<u32> = (1..=6).filter(|&v| snap.label_of(v) == 2).collect();
            assert_eq!(pi2, second);
            let min = clocks.times()[2..].iter().copied().fold(f64::INFINITY, f64::min);
            assert_eq!(time, min);
        }
    }

    #[test]
    fn first_jump_frequencies_on_three_vertices() {
        // states {2}, {2,3}, {3} should appear with probabilities
        // 1/4, 1/4, 1/2 (rates 1/2, 1/2, 1 over total 2)
        let reps = 40_000;
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut counts = std::collections::HashMap::new();
        for _ in 0..reps {
            let (tree, clocks) = gen_tree_and_clocks(3, &mut rng).unwrap();
            *counts.entry(first_jump(&tree, &clocks).1).or_insert(0u32) += 1;
        }
        let p = |pi2: &[u32]| counts[&pi2.to_vec()] as f64 / reps as f64;
        let sigma = |q: f64| (q * (1.0 - q) / reps as f64).sqrt();
        assert!((p(&[2]) - 0.25).abs() < 4.0 * sigma(0.25));
        assert!((p(&[2, 3]) - 0.25).abs() < 4.0 * sigma(0.25));
        assert!((p(&[3]) - 0.5).abs() < 4.0 * sigma(0.5));
    }
}
