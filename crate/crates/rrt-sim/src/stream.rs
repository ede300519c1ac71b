//! Fused generate-and-measure estimators for large-n Monte Carlo batches.
//!
//! These draw from exactly the per-vertex laws of `gen_tree`/`gen_clocks`
//! (uniform parent, Exp(1) clock — or its Bernoulli image e^{−t} when only
//! one threshold is needed) but fuse generation with measurement, so a
//! replica at n = 10⁶ costs one pass and no tree materialization. Buffers
//! are owned by the caller and reused across replicas; every cell read is
//! written first within the same call.

use rand::Rng;

use crate::clocks::exp1;

/// Reusable per-worker scratch space.
#[derive(Debug, Default)]
pub struct StreamBuf {
    min_clock: Vec<f64>,
    labels: Vec<u32>,
    sizes: Vec<u64>,
    aux_labels: Vec<u32>,
    aux_sizes: Vec<u64>,
    block_sizes: Vec<u64>,
}

impl StreamBuf {
    pub fn new() -> Self {
        StreamBuf::default()
    }

    /// Root-cluster sizes at every point of an ascending time grid, coupled
    /// through one realization. Only the minimum clock along the path to the
    /// root matters, so clocks are only drawn while the parent is still
    /// connected at the smallest grid time.
    pub fn root_sizes_over_grid<R: Rng + ?Sized>(
        &mut self,
        n: u32,
        t_grid: &[f64],
        rng: &mut R,
    ) -> Vec<u64> {
        assert!(!t_grid.is_empty() && t_grid.windows(2).all(|w| w[0] <= w[1]));
        assert!(t_grid[0] >= 0.0 && n >= 1);
        let t0 = t_grid[0];
        let minc = &mut self.min_clock;
        minc.resize(n as usize + 1, 0.0);
        minc[1] = f64::INFINITY;
        let mut hist = vec![0u64; t_grid.len() + 1];
        for i in 2..=n as usize {
            let mp = minc[rng.random_range(1..i as u32) as usize];
            let m = if mp <= t0 { mp } else { exp1(rng).min(mp) };
            minc[i] = m;
            hist[t_grid.partition_point(|&t| t < m)] += 1;
        }
        let mut acc = 1u64;
        let mut sizes = vec![0u64; t_grid.len()];
        for g in (0..t_grid.len()).rev() {
            acc += hist[g + 1];
            sizes[g] = acc;
        }
        sizes
    }

    /// All cluster sizes of a fresh tree percolated at a single time t
    /// (Bernoulli keep probability e^{−t}), in least-element cluster order.
    pub fn percolated_sizes<R: Rng + ?Sized>(
        &mut self,
        n: u32,
        t: f64,
        rng: &mut R,
    ) -> &[u64] {
        assert!(n >= 1 && t >= 0.0);
        let keep = (-t).exp();
        let labels = &mut self.labels;
        let sizes = &mut self.sizes;
        labels.resize(n as usize + 1, 0);
        sizes.clear();
        labels[1] = 1;
        sizes.push(1);
        for i in 2..=n as usize {
            let u = rng.random_range(1..i as u32);
            if rng.random::<f64>() < keep {
                let l = labels[u as usize];
                labels[i] = l;
                sizes[l as usize - 1] += 1;
            } else {
                sizes.push(1);
                labels[i] = sizes.len() as u32;
            }
        }
        sizes
    }

    /// Two-stage composition: percolate a fresh tree at time s, then re-grow
    /// an independent recursive tree on each block and percolate it at time
    /// t. By the splitting property the resulting cluster sizes are
    /// distributed exactly like a single percolation at s + t; in weight
    /// terms the sub-cluster of weight x_j within block i contributes
    /// x_i^{e^{−t}}·x_j. Sizes are appended to `out`.
    pub fn compose_two_stage<R: Rng + ?Sized>(
        &mut self,
        n: u32,
        s: f64,
        t: f64,
        rng: &mut R,
        out: &mut Vec<u64>,
    ) {
        out.clear();
        let mut blocks = std::mem::take(&mut self.block_sizes);
        blocks.clear();
        blocks.extend_from_slice(self.percolated_sizes(n, s, rng));
        let keep = (-t).exp();
        for &m in &blocks {
            if m == 1 {
                out.push(1);
                continue;
            }
            let labels = &mut self.aux_labels;
            let sizes = &mut self.aux_sizes;
            labels.resize(m as usize + 1, 0);
            sizes.clear();
            labels[1] = 1;
            sizes.push(1);
            for i in 2..=m as usize {
                let u = rng.random_range(1..i as u32);
                if rng.random::<f64>() < keep {
                    let l = labels[u as usize];
                    labels[i] = l;
                    sizes[l as usize - 1] += 1;
                } else {
                    sizes.push(1);
                    labels[i] = sizes.len() as u32;
                }
            }
            out.extend_from_slice(sizes);
        }
        self.block_sizes = blocks;
    }
}

/// Largest `k` values of a size list, descending (insertion into a fixed
/// small array; the lists are long, k is 3).
pub fn top_k_sizes(sizes: &[u64], k: usize) -> Vec<u64> {
    let mut top = vec![0u64; k];
    for &s in sizes {
        if s > top[k - 1] {
            let mut pos = k - 1;
            while pos > 0 && top[pos - 1] < s {
                top[pos] = top[pos - 1];
                pos -= 1;
            }
            top[pos] = s;
        }
    }
    top
}
