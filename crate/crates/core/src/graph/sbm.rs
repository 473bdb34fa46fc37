use rand::RngCore;

use super::{is_connected, ClusterLabels, SparseGraph};
use crate::error::{Error, Result};
use crate::rng::uniform01;

/// Redraw budget used when none is given.
pub const DEFAULT_MAX_REDRAWS: usize = 100;

/// Parameters of a k-way stochastic block model.
#[derive(Clone, Debug, PartialEq)]
pub struct SbmParams {
    pub cluster_sizes: Vec<usize>,
    /// Within-cluster edge probability.
    pub p: f64,
    /// Between-cluster edge probability.
    pub q: f64,
}

impl SbmParams {
    pub fn new(cluster_sizes: Vec<usize>, p: f64, q: f64) -> Result<Self> {
        let params = Self { cluster_sizes, p, q };
        params.validate()?;
        Ok(params)
    }

    /// `p = α ln(m)/m`, `q = β ln(m)/m`.
    pub fn from_alpha_beta(cluster_sizes: Vec<usize>, alpha: f64, beta: f64, m: usize) -> Result<Self> {
        let (p, q) = scaled_probabilities(alpha, beta, m)?;
        Self::new(cluster_sizes, p, q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.cluster_sizes.len() < 2 {
            return Err(Error::invalid("a block model needs at least two clusters"));
        }
        if self.cluster_sizes.contains(&0) {
            return Err(Error::invalid("cluster sizes must be positive"));
        }
        if !(0.0 <= self.q && self.q < self.p && self.p <= 1.0) {
            return Err(Error::invalid(format!("need 0 <= q < p <= 1, got p = {}, q = {}", self.p, self.q)));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.cluster_sizes.iter().sum()
    }

    pub fn k(&self) -> usize {
        self.cluster_sizes.len()
    }
}

/// `(α ln m / m, β ln m / m)`.
pub(crate) fn scaled_probabilities(alpha: f64, beta: f64, m: usize) -> Result<(f64, f64)> {
    if m < 2 {
        return Err(Error::invalid("scale node count m must be at least 2"));
    }
    let m = m as f64;
    let s = m.ln() / m;
    Ok((alpha * s, beta * s))
}

/// One draw from the block model. Nodes are numbered cluster by cluster and
/// each unordered pair `i < j` is decided by one uniform draw, in
/// lexicographic order, with an edge when the draw is below `p` (same
/// cluster) or `q` (different clusters).
pub fn sbm_sample<R: RngCore + ?Sized>(params: &SbmParams, rng: &mut R) -> (SparseGraph, ClusterLabels) {
    let truth = ClusterLabels::from_sizes(&params.cluster_sizes);
    let graph = sample_blocks(truth.as_slice(), params.p, params.q, rng);
    (graph, truth)
}

/// Block sampling without the `q < p` requirement.
pub(crate) fn sample_blocks<R: RngCore + ?Sized>(labels: &[usize], p: f64, q: f64, rng: &mut R) -> SparseGraph {
    let n = labels.len();
    let expected = (p.max(q) * (n * n.saturating_sub(1)) as f64 / 2.0) as usize;
    let mut edges = Vec::with_capacity(expected + expected / 8 + 16);
    for i in 0..n {
        for j in (i + 1)..n {
            let prob = if labels[i] == labels[j] { p } else { q };
            if uniform01(rng) < prob {
                edges.push((i, j));
            }
        }
    }
    SparseGraph::from_simple_edges(n, &edges)
}

/// A connected block-model draw and how many draws it took.
#[derive(Clone, Debug)]
pub struct SbmDraw {
    pub graph: SparseGraph,
    pub truth: ClusterLabels,
    pub attempts: usize,
}

/// Draws until the graph is connected: one initial draw plus at most
/// `max_redraws` redraws.
pub fn sbm_sample_connected<R: RngCore + ?Sized>(
    params: &SbmParams,
    rng: &mut R,
    max_redraws: usize,
) -> Result<SbmDraw> {
    let total = max_redraws + 1;
    for attempt in 1..=total {
        let (graph, truth) = sbm_sample(params, rng);
        if is_connected(&graph) {
            return Ok(SbmDraw { graph, truth, attempts: attempt });
        }
    }
    Err(Error::Generation {
        attempts: total,
        reason: format!("no connected draw for sizes {:?}, p = {}, q = {}", params.cluster_sizes, params.p, params.q),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn deterministic_extremes() {
        let params = SbmParams::new(vec![3, 3], 1.0, 0.0).unwrap();
        let (g, truth) = sbm_sample(&params, &mut rng::seeded(1));
        assert_eq!(g.edge_count(), 6);
        assert_eq!(truth.as_slice(), &[0, 0, 0, 1, 1, 1]);
        for (u, v) in g.edges() {
            assert_eq!(truth.get(u), truth.get(v));
        }
        g.validate().unwrap();
    }

    #[test]
    fn params_validation() {
        assert!(SbmParams::new(vec![3], 0.5, 0.1).is_err());
        assert!(SbmParams::new(vec![3, 0], 0.5, 0.1).is_err());
        assert!(SbmParams::new(vec![3, 3], 0.5, 0.5).is_err());
        assert!(SbmParams::new(vec![3, 3], 1.2, 0.5).is_err());
        assert!(SbmParams::new(vec![3, 3], 0.5, -0.1).is_err());
        let p = SbmParams::from_alpha_beta(vec![100, 100], 9.0, 1.0, 100).unwrap();
        assert!((p.p - 9.0 * (100f64).ln() / 100.0).abs() < 1e-15);
    }

    #[test]
    fn edge_count_within_binomial_band() {
        // p = q = 0.5 is outside SbmParams (q < p), so go through the block sampler.
        let labels = ClusterLabels::from_sizes(&[50, 50]);
        let pairs = 100.0 * 99.0 / 2.0;
        let mean = 0.5 * pairs;
        let sd = (pairs * 0.25f64).sqrt();
        let mut r = rng::seeded(12);
        for _ in 0..20 {
            let g = sample_blocks(labels.as_slice(), 0.5, 0.5, &mut r);
            assert!((g.edge_count() as f64 - mean).abs() <= 4.0 * sd);
        }
    }

    #[test]
    fn same_seed_same_graph() {
        let params = SbmParams::from_alpha_beta(vec![40, 40, 40], 6.0, 1.0, 40).unwrap();
        let (a, _) = sbm_sample(&params, &mut rng::seeded(77));
        let (b, _) = sbm_sample(&params, &mut rng::seeded(77));
        assert_eq!(a, b);
        a.validate().unwrap();
    }

    #[test]
    fn connected_draws() {
        let complete = SbmParams::new(vec![3, 3], 1.0, 0.999_999).unwrap();
        let d = sbm_sample_connected(&complete, &mut rng::seeded(0), 5).unwrap();
        assert_eq!(d.attempts, 1);

        let split = SbmParams::new(vec![3, 3], 1.0, 0.0).unwrap();
        match sbm_sample_connected(&split, &mut rng::seeded(0), 7) {
            Err(Error::Generation { attempts, .. }) => assert_eq!(attempts, 8),
            other => panic!("expected generation error, got {other:?}"),
        }

        let params = SbmParams::from_alpha_beta(vec![100; 5], 4.0, 2.0, 100).unwrap();
        let d = sbm_sample_connected(&params, &mut rng::seeded(3), DEFAULT_MAX_REDRAWS).unwrap();
        assert!(d.attempts <= 3, "took {} attempts", d.attempts);
    }
}
