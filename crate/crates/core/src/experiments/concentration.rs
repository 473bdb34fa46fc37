use super::config::MatrixKind;
use super::sweep::embedding;
use crate::cluster::indicator_basis;
use crate::error::{Error, Result};
use crate::graph::sbm::{sample_blocks, scaled_probabilities};
use crate::graph::ClusterLabels;
use crate::linalg::{spectral_norm, subspace_projector_distance, Difference, LinearOperator};
use crate::par::{map_indexed, Execution};
use crate::rng::{seeded_stream, stream, trial_seed};

/// Block-model sweep over cluster size `m` at fixed `(α, β)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConcentrationConfig {
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    /// Ascending cluster sizes; `p = α ln(m)/m`.
    pub m_values: Vec<usize>,
    pub trials: usize,
    pub master_seed: u64,
    pub execution: Execution,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConcentrationRow {
    pub m: usize,
    /// Mean of `‖A − M‖₂ / √(ln m)`.
    pub norm_ratio: f64,
    /// Mean of `‖WWᵀ − V_kV_kᵀ‖₂ · √(ln m)`.
    pub scaled_distance: f64,
}

/// The expected adjacency `M = E[A]` of a block model, with `p` on the
/// diagonal blocks (diagonal included) and `q` elsewhere.
struct BlockMean<'a> {
    labels: &'a [usize],
    k: usize,
    p: f64,
    q: f64,
}

impl LinearOperator for BlockMean<'_> {
    fn nrows(&self) -> usize {
        self.labels.len()
    }
    fn ncols(&self) -> usize {
        self.labels.len()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let mut sums = vec![0.0; self.k];
        for (&c, &v) in self.labels.iter().zip(x) {
            sums[c] += v;
        }
        let total: f64 = sums.iter().sum();
        for (yi, &c) in y.iter_mut().zip(self.labels) {
            *yi = self.p * sums[c] + self.q * (total - sums[c]);
        }
    }
    fn apply_transpose(&self, x: &[f64], y: &mut [f64]) {
        self.apply(x, y)
    }
}

/// For each `m`, averages `‖A − M‖₂/√(ln m)` and the scaled distance between
/// the indicator subspace and the top-`k` eigenvectors of `A`. Draws are not
/// conditioned on connectivity, and `q = p` is allowed.
pub fn concentration_check(config: &ConcentrationConfig) -> Result<Vec<ConcentrationRow>> {
    if config.k < 2 || config.trials == 0 || config.m_values.is_empty() {
        return Err(Error::invalid("need k >= 2, trials >= 1 and at least one m"));
    }
    if config.m_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("m values must be strictly ascending"));
    }
    let mut rows = Vec::with_capacity(config.m_values.len());
    for (mi, &m) in config.m_values.iter().enumerate() {
        let (p, q) = scaled_probabilities(config.alpha, config.beta, m)?;
        if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q) {
            return Err(Error::invalid(format!("m = {m} gives p = {p}, q = {q} outside [0, 1]")));
        }
        let truth = ClusterLabels::from_sizes(&vec![m; config.k]);
        let w = indicator_basis(&truth)?;
        let log_m = (m as f64).ln();
        let per_trial = map_indexed(config.execution, config.trials, |t| -> Result<(f64, f64)> {
            let seed = trial_seed(config.master_seed, mi as u64, t as u64);
            let graph = sample_blocks(truth.as_slice(), p, q, &mut seeded_stream(seed, stream::GRAPH));
            let mean = BlockMean { labels: truth.as_slice(), k: config.k, p, q };
            let norm = spectral_norm(&Difference { left: &graph, right: &mean })?;
            let vk = embedding(&graph, config.k, MatrixKind::Adjacency, seed)?;
            let dist = subspace_projector_distance(&w, &vk)?;
            Ok((norm / log_m.sqrt(), dist * log_m.sqrt()))
        });
        let mut sum = (0.0, 0.0);
        for r in per_trial {
            let (a, b) = r?;
            sum.0 += a;
            sum.1 += b;
        }
        let t = config.trials as f64;
        rows.push(ConcentrationRow { m, norm_ratio: sum.0 / t, scaled_distance: sum.1 / t });
    }
    Ok(rows)
}
