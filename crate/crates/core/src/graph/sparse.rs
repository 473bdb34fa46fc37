use crate::error::{Error, Result};
use crate::linalg::LinearOperator;

/// Undirected simple graph in compressed sparse row form.
///
/// Neighbor lists are sorted, duplicate-free and loop-free, and adjacency is
/// symmetric. All constructors uphold this.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseGraph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    edge_count: usize,
}

/// What [`SparseGraph::from_edges`] dropped.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildStats {
    pub duplicates: usize,
    pub self_loops: usize,
}

impl SparseGraph {
    /// Builds a graph on `n` nodes. Self-loops and repeated edges (in either
    /// orientation) are dropped and counted.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<(Self, BuildStats)>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut stats = BuildStats::default();
        let mut lists: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!("edge ({u}, {v}) outside {n} nodes")));
            }
            if u == v {
                stats.self_loops += 1;
                continue;
            }
            lists[u].push(v);
            lists[v].push(u);
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut neighbors = Vec::new();
        let mut half_edges_dropped = 0;
        for list in lists.iter_mut() {
            list.sort_unstable();
            let before = list.len();
            list.dedup();
            half_edges_dropped += before - list.len();
            neighbors.extend_from_slice(list);
            offsets.push(neighbors.len());
        }
        stats.duplicates = half_edges_dropped / 2;
        let edge_count = neighbors.len() / 2;
        Ok((Self { offsets, neighbors, edge_count }, stats))
    }

    /// Builds from edges already known to be simple with `u < v`, listed
    /// once each.
    pub(crate) fn from_simple_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut neighbors = vec![0; 2 * edges.len()];
        for &(u, v) in edges {
            neighbors[fill[u]] = v;
            fill[u] += 1;
            neighbors[fill[v]] = u;
            fill[v] += 1;
        }
        for i in 0..n {
            neighbors[offsets[i]..offsets[i + 1]].sort_unstable();
        }
        Self { offsets, neighbors, edge_count: edges.len() }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[self.offsets[node]..self.offsets[node + 1]]
    }

    #[inline]
    pub fn degree(&self, node: usize) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|i| self.degree(i)).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Every undirected edge once, as `(u, v)` with `u < v`, in row order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| self.neighbors(u).iter().copied().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub(crate) fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub(crate) fn raw_neighbors(&self) -> &[usize] {
        &self.neighbors
    }

    /// Checks every structural invariant.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if self.offsets[0] != 0 || *self.offsets.last().unwrap() != self.neighbors.len() {
            return Err(Error::invalid("offsets do not span the neighbor array"));
        }
        for u in 0..n {
            let list = self.neighbors(u);
            for w in list.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::invalid(format!("neighbors of {u} unsorted or duplicated")));
                }
            }
            for &v in list {
                if v >= n {
                    return Err(Error::invalid(format!("neighbor {v} of {u} out of range")));
                }
                if v == u {
                    return Err(Error::invalid(format!("self-loop at {u}")));
                }
                if !self.has_edge(v, u) {
                    return Err(Error::invalid(format!("edge {u}->{v} has no reverse")));
                }
            }
        }
        if self.neighbors.len() != 2 * self.edge_count {
            return Err(Error::invalid("edge count disagrees with adjacency"));
        }
        Ok(())
    }

    /// Subgraph induced by `nodes`; new node `i` is old node `nodes[i]`.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> SparseGraph {
        let mut new_index = vec![usize::MAX; self.n()];
        for (i, &v) in nodes.iter().enumerate() {
            new_index[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in nodes.iter().enumerate() {
            for &w in self.neighbors(v) {
                let j = new_index[w];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        SparseGraph::from_simple_edges(nodes.len(), &edges)
    }

    /// Relabels nodes: old node `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> SparseGraph {
        assert_eq!(perm.len(), self.n());
        let edges: Vec<(usize, usize)> = self
            .edges()
            .map(|(u, v)| {
                let (a, b) = (perm[u], perm[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        SparseGraph::from_simple_edges(self.n(), &edges)
    }

    /// Disjoint union; nodes of `graphs[1]` follow those of `graphs[0]`, etc.
    pub fn disjoint_union(graphs: &[SparseGraph]) -> SparseGraph {
        let mut edges = Vec::new();
        let mut base = 0;
        for g in graphs {
            edges.extend(g.edges().map(|(u, v)| (u + base, v + base)));
            base += g.n();
        }
        SparseGraph::from_simple_edges(base, &edges)
    }
}

impl LinearOperator for SparseGraph {
    fn nrows(&self) -> usize {
        self.n()
    }
    fn ncols(&self) -> usize {
        self.n()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (u, yu) in y.iter_mut().enumerate() {
            *yu = self.neighbors(u).iter().map(|&v| x[v]).sum();
        }
    }
    fn apply_transpose(&self, x: &[f64], y: &mut [f64]) {
        self.apply(x, y)
    }
}
