//! Percolation clusters at a fixed time and their normalized weights.

use partition_core::Partition;

use crate::clocks::EdgeClocks;
use crate::tree::RecursiveTree;
use crate::{normalized_weight, RrtSimError};

/// Clusters of Π(t)|[n]: per-vertex labels (1-based, assigned in increasing
/// order of cluster minima) and per-cluster sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterSnapshot {
    t: f64,
    /// label[i] for i = 1..=n; slot 0 unused.
    label: Vec<u32>,
    sizes: Vec<u64>,
}

impl ClusterSnapshot {
    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn n(&self) -> u64 {
        (self.label.len() - 1) as u64
    }

    pub fn num_clusters(&self) -> usize {
        self.sizes.len()
    }

    /// Cluster label of vertex v (1-based; label(1) = 1).
    pub fn label_of(&self, v: u32) -> u32 {
        self.label[v as usize]
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }
}

/// One ascending pass: vertex 1 opens cluster 1; vertex i joins its parent's
/// cluster when ε_i > t and opens a new cluster otherwise. New clusters open
/// at their minimum vertex, so labels come out ordered by cluster minima.
pub fn clusters_at(tree: &RecursiveTree, clocks: &EdgeClocks, t: f64) -> ClusterSnapshot {
    assert!(t >= 0.0, "time must be nonnegative");
    assert_eq!(tree.n(), clocks.n(), "tree and clocks must agree on n");
    let n = tree.n();
    let mut label = vec![0u32; n as usize + 1];
    let mut sizes: Vec<u64> = Vec::new();
    label[1] = 1;
    sizes.push(1);
    for i in 2..=n {
        if clocks.time(i) > t {
            let l = label[tree.parent_of(i) as usize];
            label[i as usize] = l;
            sizes[l as usize - 1] += 1;
        } else {
            sizes.push(1);
            label[i as usize] = sizes.len() as u32;
        }
    }
    ClusterSnapshot { t, label, sizes }
}

/// Per-cluster normalized weights X̂_i(t) = n^{−e^{−t}}·size_i.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightEstimate {
    pub t: f64,
    pub n: u64,
    pub values: Vec<f64>,
}

pub fn weights_at(snap: &ClusterSnapshot) -> WeightEstimate {
    let n = snap.n();
    WeightEstimate {
        t: snap.t(),
        n,
        values: snap
            .sizes()
            .iter()
            .map(|&s| normalized_weight(n, snap.t(), s))
            .collect(),
    }
}

/// Weights ranked decreasingly; ties keep their block order (stable sort).
pub fn sorted_weights(w: &WeightEstimate) -> Vec<f64> {
    let mut v = w.values.clone();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Weight of the cluster of vertex i inside the subtree rooted at i,
/// irrespective of the state of the edge above i: one ascending pass over
/// the labels j > i, which are the only candidates for T_i.
pub fn subtree_cluster_weight(
    tree: &RecursiveTree,
    clocks: &EdgeClocks,
    i: u32,
    t: f64,
) -> Result<f64, RrtSimError> {
    let n = tree.n();
    if i < 1 || i > n {
        return Err(RrtSimError::VertexOutOfRange { v: i, n });
    }
    assert!(t >= 0.0);
    let mut connected = vec![false; n as usize + 1];
    connected[i as usize] = true;
    let mut count = 1u64;
    for j in (i + 1).max(2)..=n {
        let u = tree.parent_of(j);
        if connected[u as usize] && clocks.time(j) > t {
            connected[j as usize] = true;
            count += 1;
        }
    }
    Ok(normalized_weight(n as u64, t, count))
}

/// The partition of [m] induced by the snapshot's labels, m ≤ n.
pub fn snapshot_partition(snap: &ClusterSnapshot, m: u32) -> Result<Partition, RrtSimError> {
    if m < 1 || m as u64 > snap.n() {
        return Err(RrtSimError::VertexOutOfRange {
            v: m,
            n: snap.n() as u32,
        });
    }
    let labels: Vec<u32> = (1..=m).map(|v| snap.label_of(v)).collect();
    Ok(Partition::from_labels(&labels).expect("labels cover 1..=m"))
}
