use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Sampling distribution over nodes, `p_j ∝ ‖row j of V_k‖²`.
#[derive(Clone, Debug, PartialEq)]
pub struct LeverageDistribution {
    pub probabilities: Vec<f64>,
}

/// `p_j = ‖row j‖² / k` for orthonormal `V_k`. The squared norms are divided
/// by their actual total, which is `k` up to rounding, so the result always
/// sums to one.
pub fn leverage_distribution(vk: &DenseMatrix) -> Result<LeverageDistribution> {
    let mut probabilities: Vec<f64> = (0..vk.rows()).map(|j| vk.row(j).iter().map(|x| x * x).sum()).collect();
    let total: f64 = probabilities.iter().sum();
    if !(total > 0.0) {
        return Err(Error::Degenerate("all rows of the basis are zero".into()));
    }
    for p in &mut probabilities {
        *p /= total;
    }
    Ok(LeverageDistribution { probabilities })
}

/// `⌈γ k ln(k/δ)⌉`.
pub fn randomized_sample_count(k: usize, gamma: f64, delta: f64) -> Result<usize> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::invalid(format!("gamma must be positive, got {gamma}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!("delta must lie in (0, 1), got {delta}")));
    }
    if k == 0 {
        return Err(Error::invalid("k must be positive"));
    }
    let k_f = k as f64;
    Ok((gamma * k_f * (k_f / delta).ln()).ceil().max(1.0) as usize)
}
