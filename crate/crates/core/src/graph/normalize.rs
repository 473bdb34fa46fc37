use super::SparseGraph;
use crate::linalg::LinearOperator;

/// `A_N = D^{-1/2} A D^{-1/2}` stored with the sparsity of `A`.
///
/// Rows and columns of degree-zero nodes are zero; those nodes are listed in
/// `isolated`.
#[derive(Clone, Debug)]
pub struct NormalizedAdjacency {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    weights: Vec<f64>,
    pub isolated: Vec<usize>,
}

pub fn degree_normalize(graph: &SparseGraph) -> NormalizedAdjacency {
    let inv_sqrt: Vec<f64> =
        graph.degrees().into_iter().map(|d| if d == 0 { 0.0 } else { 1.0 / (d as f64).sqrt() }).collect();
    let mut weights = Vec::with_capacity(graph.raw_neighbors().len());
    for u in 0..graph.n() {
        for &v in graph.neighbors(u) {
            weights.push(inv_sqrt[u] * inv_sqrt[v]);
        }
    }
    let isolated = (0..graph.n()).filter(|&u| graph.degree(u) == 0).collect();
    NormalizedAdjacency {
        offsets: graph.offsets().to_vec(),
        neighbors: graph.raw_neighbors().to_vec(),
        weights,
        isolated,
    }
}

impl NormalizedAdjacency {
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Weight of edge `(u, v)`, zero when absent.
    pub fn weight(&self, u: usize, v: usize) -> f64 {
        let row = &self.neighbors[self.offsets[u]..self.offsets[u + 1]];
        match row.binary_search(&v) {
            Ok(pos) => self.weights[self.offsets[u] + pos],
            Err(_) => 0.0,
        }
    }
}

impl LinearOperator for NormalizedAdjacency {
    fn nrows(&self) -> usize {
        self.n()
    }
    fn ncols(&self) -> usize {
        self.n()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (u, yu) in y.iter_mut().enumerate() {
            let range = self.offsets[u]..self.offsets[u + 1];
            *yu = self.neighbors[range.clone()].iter().zip(&self.weights[range]).map(|(&v, &w)| w * x[v]).sum();
        }
    }
    fn apply_transpose(&self, x: &[f64], y: &mut [f64]) {
        self.apply(x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_graphs() {
        let (edge, _) = SparseGraph::from_edges(2, vec![(0, 1)]).unwrap();
        assert_eq!(degree_normalize(&edge).weight(0, 1), 1.0);

        let (tri, _) = SparseGraph::from_edges(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let n = degree_normalize(&tri);
        for (u, v) in tri.edges() {
            assert!((n.weight(u, v) - 0.5).abs() < 1e-15);
        }

        let (star, _) = SparseGraph::from_edges(5, (1..5).map(|l| (0, l))).unwrap();
        let n = degree_normalize(&star);
        for l in 1..5 {
            assert!((n.weight(0, l) - 0.5).abs() < 1e-15);
            assert_eq!(n.weight(l, 0), n.weight(0, l));
        }
    }

    #[test]
    fn isolated_nodes_get_zero_rows() {
        let (g, _) = SparseGraph::from_edges(4, vec![(0, 1)]).unwrap();
        let n = degree_normalize(&g);
        assert_eq!(n.isolated, vec![2, 3]);
        let mut y = vec![9.0; 4];
        n.apply(&[1.0, 1.0, 1.0, 1.0], &mut y);
        assert_eq!(y, vec![1.0, 1.0, 0.0, 0.0]);
    }
}
