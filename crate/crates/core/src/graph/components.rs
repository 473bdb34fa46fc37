use std::collections::VecDeque;

use super::{ClusterLabels, SparseGraph};

/// Breadth-first component labels. Components are numbered in order of
/// their smallest node.
pub fn connected_components(graph: &SparseGraph) -> ClusterLabels {
    let n = graph.n();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    let mut queue = VecDeque::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = next;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for &v in graph.neighbors(u) {
                if label[v] == usize::MAX {
                    label[v] = next;
                    queue.push_back(v);
                }
            }
        }
        next += 1;
    }
    ClusterLabels::new(label, next).expect("labels are below the component count")
}

pub fn is_connected(graph: &SparseGraph) -> bool {
    graph.n() > 0 && connected_components(graph).k() == 1
}

/// Sizes of all components, largest first.
pub fn component_sizes(graph: &SparseGraph) -> Vec<usize> {
    let mut sizes = connected_components(graph).sizes();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

/// The largest component (lowest-numbered on ties) as its own graph, and the
/// original index of each of its nodes.
pub fn largest_component(graph: &SparseGraph) -> (SparseGraph, Vec<usize>) {
    let comps = connected_components(graph);
    let sizes = comps.sizes();
    let best = (0..sizes.len()).max_by(|&a, &b| sizes[a].cmp(&sizes[b]).then(b.cmp(&a))).unwrap_or(0);
    let nodes: Vec<usize> = (0..graph.n()).filter(|&v| comps.get(v) == best).collect();
    (graph.induced_subgraph(&nodes), nodes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangles() -> SparseGraph {
        SparseGraph::from_edges(6, vec![(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap().0
    }

    #[test]
    fn two_triangles() {
        let c = connected_components(&triangles());
        assert_eq!(c.k(), 2);
        assert_eq!(c.as_slice(), &[0, 0, 0, 1, 1, 1]);
    }

    #[test]
    fn path_is_one_component() {
        let (g, _) = SparseGraph::from_edges(5, (0..4).map(|i| (i, i + 1))).unwrap();
        assert!(is_connected(&g));
    }

    #[test]
    fn numbering_by_smallest_member() {
        let (g, _) = SparseGraph::from_edges(5, vec![(4, 1), (0, 3)]).unwrap();
        let c = connected_components(&g);
        assert_eq!(c.as_slice(), &[0, 1, 2, 0, 1]);
    }

    #[test]
    fn largest_component_with_map() {
        let (g, _) = SparseGraph::from_edges(7, vec![(0, 1), (2, 3), (3, 4), (4, 6)]).unwrap();
        let (sub, map) = largest_component(&g);
        assert_eq!(map, vec![2, 3, 4, 6]);
        assert_eq!(sub.edge_count(), 3);
        assert_eq!(component_sizes(&g), vec![4, 2, 1]);
        let (sub, map) = largest_component(&triangles());
        assert_eq!(map, vec![0, 1, 2]);
        assert_eq!(sub.edge_count(), 3);
    }
}
