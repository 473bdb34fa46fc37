use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::RngCore;

use super::leverage::{leverage_distribution, randomized_sample_count};
use crate::error::{Error, Result};
use crate::factor::{cpqr, polar};
use crate::graph::ClusterLabels;
use crate::linalg::{jacobi_svd_small, DenseMatrix};
use crate::par::{for_each_chunk_mut, Execution};

/// Allowed `‖VᵀV − I‖_F` for an input basis.
pub const ORTHONORMALITY_TOL: f64 = 1e-6;

/// Below this `σ_min(R₁)` the pivot block is reported as rank deficient.
pub const DEGENERATE_SIGMA: f64 = 1e-12;

const SCORE_CHUNK_ROWS: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AssignWarning {
    /// The selected pivot columns are numerically rank deficient.
    RankDeficientPivots { sigma_min: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AssignOptions {
    /// When set, nodes whose largest score falls below
    /// `threshold × (largest score over all nodes)` are listed as unassigned.
    /// They still get an argmax label.
    pub unassigned_threshold: Option<f64>,
    pub execution: Execution,
}

impl Default for AssignOptions {
    fn default() -> Self {
        Self { unassigned_threshold: None, execution: Execution::default() }
    }
}

impl AssignOptions {
    /// Unassigned-node reporting at the usual `0.2/√k` level.
    pub fn with_unassigned(k: usize) -> Self {
        Self { unassigned_threshold: Some(0.2 / (k as f64).sqrt()), ..Self::default() }
    }
}

#[derive(Clone, Debug)]
pub struct AssignmentResult {
    pub labels: ClusterLabels,
    /// Orthogonal polar factor `U` of the pivot block.
    pub rotation: DenseMatrix,
    /// Selected node indices, in pivot order.
    pub pivots: Vec<usize>,
    /// `n × k`, `scores[(j, i)] = |(Uᵀ V_kᵀ)_{i,j}|`.
    pub scores: DenseMatrix,
    pub sigma_min: f64,
    pub warnings: Vec<AssignWarning>,
    pub unassigned: Vec<usize>,
}

pub fn assign_deterministic(vk: &DenseMatrix) -> Result<AssignmentResult> {
    assign_deterministic_with(vk, &AssignOptions::default())
}

/// CPQR of `V_kᵀ`, polar factor of the `k` pivot columns, then each node goes
/// to the row of `|UᵀV_kᵀ|` holding its largest entry (lowest index on ties).
pub fn assign_deterministic_with(vk: &DenseMatrix, opts: &AssignOptions) -> Result<AssignmentResult> {
    check_basis(vk)?;
    let qr = cpqr(&vk.transpose())?;
    let pivots = qr.pivots().to_vec();
    let r1 = qr.r1();
    finish(vk, pivots, &r1, opts)
}

pub fn assign_randomized<R: RngCore + ?Sized>(
    vk: &DenseMatrix,
    gamma: f64,
    delta: f64,
    rng: &mut R,
) -> Result<AssignmentResult> {
    assign_randomized_with(vk, gamma, delta, rng, &AssignOptions::default())
}

/// Samples `⌈γ k ln(k/δ)⌉` nodes with replacement from the leverage
/// distribution and runs the pivot selection on those columns only.
pub fn assign_randomized_with<R: RngCore + ?Sized>(
    vk: &DenseMatrix,
    gamma: f64,
    delta: f64,
    rng: &mut R,
    opts: &AssignOptions,
) -> Result<AssignmentResult> {
    check_basis(vk)?;
    let k = vk.cols();
    let count = randomized_sample_count(k, gamma, delta)?;
    let dist = leverage_distribution(vk)?;
    let sampler = WeightedIndex::new(&dist.probabilities)
        .map_err(|e| Error::Degenerate(format!("leverage distribution: {e}")))?;
    let sampled: Vec<usize> = (0..count).map(|_| sampler.sample(rng)).collect();

    let mut distinct = sampled.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < k {
        return Err(Error::Degenerate(format!("sampled {} distinct nonzero columns, need {k}", distinct.len())));
    }

    let block = vk.select_rows(&sampled).transpose();
    let qr = cpqr(&block)?;
    let pivots = qr.pivots().iter().map(|&p| sampled[p]).collect();
    let r1 = qr.r1();
    finish(vk, pivots, &r1, opts)
}

/// Normalized indicator basis `W`: column `c` is `1/√|S_c|` on cluster `c`.
pub fn indicator_basis(truth: &ClusterLabels) -> Result<DenseMatrix> {
    let sizes = truth.sizes();
    if sizes.contains(&0) {
        return Err(Error::invalid("indicator basis needs non-empty clusters"));
    }
    let scale: Vec<f64> = sizes.iter().map(|&s| 1.0 / (s as f64).sqrt()).collect();
    let mut w = DenseMatrix::zeros(truth.len(), truth.k());
    for (j, &c) in truth.as_slice().iter().enumerate() {
        w.row_mut(j)[c] = scale[c];
    }
    Ok(w)
}

fn check_basis(vk: &DenseMatrix) -> Result<()> {
    let (n, k) = vk.shape();
    if k > n {
        return Err(Error::invalid(format!("basis has {k} columns but only {n} rows")));
    }
    let defect = vk.orthonormality_defect();
    if !(defect <= ORTHONORMALITY_TOL) {
        return Err(Error::invalid(format!("basis columns are not orthonormal (defect {defect:.3e})")));
    }
    Ok(())
}

fn finish(vk: &DenseMatrix, pivots: Vec<usize>, r1: &DenseMatrix, opts: &AssignOptions) -> Result<AssignmentResult> {
    let k = vk.cols();
    let sigma_min = jacobi_svd_small(r1)?.sigma_min();
    let mut warnings = Vec::new();
    if sigma_min < DEGENERATE_SIGMA {
        warnings.push(AssignWarning::RankDeficientPivots { sigma_min });
    }
    let block = vk.select_rows(&pivots).transpose();
    let rotation = polar(&block)?.orthogonal_factor;
    let scores = score_matrix(vk, &rotation, opts.execution);

    let n = vk.rows();
    let labels: Vec<usize> = (0..n).map(|j| argmax(scores.row(j))).collect();
    let unassigned = match opts.unassigned_threshold {
        Some(t) => {
            let peak = scores.max_abs();
            (0..n).filter(|&j| scores.row(j)[labels[j]] < t * peak).collect()
        }
        None => Vec::new(),
    };
    Ok(AssignmentResult {
        labels: ClusterLabels::new(labels, k)?,
        rotation,
        pivots,
        scores,
        sigma_min,
        warnings,
        unassigned,
    })
}

/// `|V_k U|`, computed in row blocks.
fn score_matrix(vk: &DenseMatrix, u: &DenseMatrix, exec: Execution) -> DenseMatrix {
    let (n, k) = vk.shape();
    let mut out = vec![0.0; n * k];
    let v = vk.as_slice();
    let u = u.as_slice();
    for_each_chunk_mut(exec, &mut out, SCORE_CHUNK_ROWS * k, |chunk, rows| {
        let first = chunk * SCORE_CHUNK_ROWS;
        for (r, dst) in rows.chunks_mut(k).enumerate() {
            let src = &v[(first + r) * k..(first + r + 1) * k];
            for (i, d) in dst.iter_mut().enumerate() {
                let mut s = 0.0;
                for (l, &x) in src.iter().enumerate() {
                    s += x * u[l * k + i];
                }
                *d = s.abs();
            }
        }
    });
    DenseMatrix::from_vec(n, k, out).expect("shape matches")
}

/// Index of the largest entry, lowest index on ties.
pub(crate) fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate().skip(1) {
        if x > xs[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::exact_recovery;
    use crate::factor::polar;
    use crate::rng;
    use rand_distr::StandardNormal;

    fn random_orthogonal(k: usize, seed: u64) -> DenseMatrix {
        let mut r = rng::seeded(seed);
        let g = DenseMatrix::from_fn(k, k, |_, _| StandardNormal.sample(&mut r));
        polar(&g).unwrap().orthogonal_factor
    }

    #[test]
    fn two_by_two_indicator() {
        let truth = ClusterLabels::from_sizes(&[2, 2]);
        let w = indicator_basis(&truth).unwrap();
        let res = assign_deterministic(&w).unwrap();
        assert!(exact_recovery(&res.labels, &truth).unwrap());
        let mut cl: Vec<usize> = res.pivots.iter().map(|&p| truth.get(p)).collect();
        cl.sort_unstable();
        assert_eq!(cl, vec![0, 1]);
        assert!(res.warnings.is_empty());
    }

    #[test]
    fn rotated_indicator_matches() {
        let truth = ClusterLabels::from_sizes(&[5, 9, 3, 7]);
        let w = indicator_basis(&truth).unwrap();
        let z = random_orthogonal(4, 8);
        let base = assign_deterministic(&w).unwrap();
        let rotated = assign_deterministic(&w.matmul(&z).unwrap()).unwrap();
        assert!(exact_recovery(&rotated.labels, &truth).unwrap());
        assert!(exact_recovery(&rotated.labels, &base.labels).unwrap());
        assert!(rotated.rotation.orthonormality_defect() < 1e-10);
    }

    #[test]
    fn labels_are_row_argmax() {
        let truth = ClusterLabels::from_sizes(&[10, 12, 8]);
        let w = indicator_basis(&truth).unwrap().matmul(&random_orthogonal(3, 2)).unwrap();
        let res = assign_deterministic(&w).unwrap();
        for j in 0..w.rows() {
            let row = res.scores.row(j);
            assert!(row.iter().all(|&s| s >= 0.0));
            assert_eq!(res.labels.get(j), argmax(row));
        }
    }

    #[test]
    fn sequential_and_parallel_scores_agree() {
        let truth = ClusterLabels::from_sizes(&[3000, 2500, 4000]);
        let w = indicator_basis(&truth).unwrap().matmul(&random_orthogonal(3, 5)).unwrap();
        let seq = AssignOptions { execution: Execution::Sequential, ..Default::default() };
        let par = AssignOptions { execution: Execution::Parallel, ..Default::default() };
        let a = assign_deterministic_with(&w, &seq).unwrap();
        let b = assign_deterministic_with(&w, &par).unwrap();
        assert_eq!(a.scores, b.scores);
        assert_eq!(a.labels, b.labels);
    }

    #[test]
    fn rejects_non_orthonormal() {
        let m = DenseMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(assign_deterministic(&m), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn missed_cluster_warns() {
        // Two samples that land in the same cluster give identical columns.
        let truth = ClusterLabels::from_sizes(&[3, 3]);
        let w = indicator_basis(&truth).unwrap();
        let gamma = 1.5 / (2.0 * (2.0f64 / 0.5).ln());
        assert_eq!(randomized_sample_count(2, gamma, 0.5).unwrap(), 2);
        let hit = (0..200u64).find_map(|seed| {
            assign_randomized(&w, gamma, 0.5, &mut rng::seeded(seed)).ok().filter(|r| !r.warnings.is_empty())
        });
        let res = hit.expect("some seed samples one cluster twice");
        assert!(
            matches!(res.warnings[0], AssignWarning::RankDeficientPivots { sigma_min } if sigma_min < DEGENERATE_SIGMA)
        );
    }

    #[test]
    fn randomized_is_seed_deterministic() {
        let truth = ClusterLabels::from_sizes(&[40, 30, 50]);
        let w = indicator_basis(&truth).unwrap().matmul(&random_orthogonal(3, 1)).unwrap();
        let a = assign_randomized(&w, 5.0, 0.1, &mut rng::seeded(4)).unwrap();
        let b = assign_randomized(&w, 5.0, 0.1, &mut rng::seeded(4)).unwrap();
        assert_eq!(a.labels, b.labels);
        assert_eq!(a.pivots, b.pivots);
        assert!(exact_recovery(&a.labels, &truth).unwrap());
    }

    #[test]
    fn randomized_too_few_samples_is_degenerate() {
        let truth = ClusterLabels::from_sizes(&[3, 3]);
        let w = indicator_basis(&truth).unwrap();
        // γ tiny gives a single sample.
        let err = assign_randomized(&w, 1e-6, 0.5, &mut rng::seeded(0)).unwrap_err();
        assert!(matches!(err, Error::Degenerate(_)));
    }

    #[test]
    fn unassigned_flags_small_rows() {
        let mut rows = vec![vec![0.0; 2]; 5];
        rows[0] = vec![0.7, 0.0];
        rows[1] = vec![0.7, 0.0];
        rows[2] = vec![0.0, 0.7];
        rows[3] = vec![0.0, 0.7];
        rows[4] = vec![0.01, 0.0];
        let mut m = DenseMatrix::from_rows(&rows).unwrap();
        // Columns are already orthogonal; scale them to unit norm.
        let g = m.transpose_matmul(&m).unwrap();
        let s = [1.0 / g[(0, 0)].sqrt(), 1.0 / g[(1, 1)].sqrt()];
        for r in 0..5 {
            for c in 0..2 {
                m.row_mut(r)[c] *= s[c];
            }
        }
        assert!(m.orthonormality_defect() < 1e-6);
        let res = assign_deterministic_with(&m, &AssignOptions::with_unassigned(2)).unwrap();
        assert_eq!(res.unassigned, vec![4]);
        assert!(assign_deterministic(&m).unwrap().unassigned.is_empty());
    }
}
