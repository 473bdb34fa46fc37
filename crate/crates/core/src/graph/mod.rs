//! Undirected simple graphs and the tools the experiments need around them.

mod components;
mod cut;
mod io;
mod normalize;
pub(crate) mod sbm;
mod sparse;

pub use components::{component_sizes, connected_components, is_connected, largest_component};
pub use cut::multiway_cut_metric;
pub use io::{parse_edge_list, read_edge_list, read_labels, write_edge_list, write_labels, EdgeList, LABELS_HEADER};
pub use normalize::{degree_normalize, NormalizedAdjacency};
pub use sbm::{sbm_sample, sbm_sample_connected, SbmDraw, SbmParams, DEFAULT_MAX_REDRAWS};
pub use sparse::{BuildStats, SparseGraph};

use crate::error::{Error, Result};

/// Cluster index per node, each in `[0, k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClusterLabels {
    labels: Vec<usize>,
    k: usize,
}

impl ClusterLabels {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if let Some((node, &l)) = labels.iter().enumerate().find(|(_, &l)| l >= k) {
            return Err(Error::invalid(format!("node {node} has label {l} but k = {k}")));
        }
        Ok(Self { labels, k })
    }

    /// Labels with `k` inferred as one past the largest label.
    pub fn from_labels(labels: Vec<usize>) -> Self {
        let k = labels.iter().max().map_or(0, |m| m + 1);
        Self { labels, k }
    }

    /// Contiguous blocks: the first `sizes[0]` nodes get label 0, and so on.
    pub fn from_sizes(sizes: &[usize]) -> Self {
        let labels = sizes.iter().enumerate().flat_map(|(c, &s)| std::iter::repeat_n(c, s)).collect();
        Self { labels, k: sizes.len() }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.labels
    }

    pub fn get(&self, node: usize) -> usize {
        self.labels[node]
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    pub fn has_empty_cluster(&self) -> bool {
        self.sizes().contains(&0)
    }

    /// Renumbers used labels to `0..k'` in order of first appearance,
    /// dropping empty clusters.
    pub fn compacted(&self) -> ClusterLabels {
        let mut map = vec![usize::MAX; self.k];
        let mut next = 0;
        let labels = self
            .labels
            .iter()
            .map(|&l| {
                if map[l] == usize::MAX {
                    map[l] = next;
                    next += 1;
                }
                map[l]
            })
            .collect();
        ClusterLabels { labels, k: next }
    }

    /// Label of `perm_nodes[i]` becomes the label of new node `i`.
    pub fn select(&self, nodes: &[usize]) -> ClusterLabels {
        ClusterLabels { labels: nodes.iter().map(|&v| self.labels[v]).collect(), k: self.k }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_validation_and_sizes() {
        assert!(ClusterLabels::new(vec![0, 2], 2).is_err());
        let l = ClusterLabels::new(vec![2, 2, 0], 4).unwrap();
        assert_eq!(l.sizes(), vec![1, 0, 2, 0]);
        assert!(l.has_empty_cluster());
        let c = l.compacted();
        assert_eq!(c.as_slice(), &[0, 0, 1]);
        assert_eq!(c.k(), 2);
        assert_eq!(ClusterLabels::from_sizes(&[2, 1]).as_slice(), &[0, 0, 1]);
    }
}
