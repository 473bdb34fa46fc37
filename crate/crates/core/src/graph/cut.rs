use super::{ClusterLabels, SparseGraph};
use crate::error::{Error, Result};

/// `max_i |∂S_i| / |S_i|`, where `∂S_i` are the edges with exactly one end
/// in cluster `i`. Every cluster in `0..k` must be non-empty.
pub fn multiway_cut_metric(graph: &SparseGraph, labels: &ClusterLabels) -> Result<f64> {
    if labels.len() != graph.n() {
        return Err(Error::invalid(format!("{} labels for a graph with {} nodes", labels.len(), graph.n())));
    }
    let sizes = labels.sizes();
    if let Some(empty) = sizes.iter().position(|&s| s == 0) {
        return Err(Error::invalid(format!("cluster {empty} is empty")));
    }
    let mut boundary = vec![0usize; labels.k()];
    for (u, v) in graph.edges() {
        let (a, b) = (labels.get(u), labels.get(v));
        if a != b {
            boundary[a] += 1;
            boundary[b] += 1;
        }
    }
    Ok(boundary.iter().zip(&sizes).map(|(&e, &s)| e as f64 / s as f64).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bridged_triangles() -> SparseGraph {
        SparseGraph::from_edges(6, vec![(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]).unwrap().0
    }

    #[test]
    fn one_bridge_over_three_nodes() {
        let labels = ClusterLabels::from_sizes(&[3, 3]);
        let m = multiway_cut_metric(&bridged_triangles(), &labels).unwrap();
        assert_eq!(m, 1.0 / 3.0);
    }

    #[test]
    fn component_partition_and_single_cluster() {
        let (g, _) = SparseGraph::from_edges(6, vec![(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
        assert_eq!(multiway_cut_metric(&g, &ClusterLabels::from_sizes(&[3, 3])).unwrap(), 0.0);
        let all = ClusterLabels::from_sizes(&[6]);
        assert_eq!(multiway_cut_metric(&bridged_triangles(), &all).unwrap(), 0.0);
    }

    #[test]
    fn empty_cluster_rejected() {
        let labels = ClusterLabels::new(vec![0; 6], 2).unwrap();
        assert!(multiway_cut_metric(&bridged_triangles(), &labels).is_err());
    }
}
