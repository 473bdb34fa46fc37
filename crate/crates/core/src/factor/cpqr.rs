//! Golub–Businger column-pivoted QR of a wide `k × n` matrix.

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// `B Π = Q [R₁ R₂]`.
///
/// `perm[j]` is the original index of the column placed at position `j`, so
/// the first `k` entries are the selected pivot columns.
#[derive(Clone, Debug)]
pub struct CpqrResult {
    pub perm: Vec<usize>,
    pub q_factor: DenseMatrix,
    pub r_factor: DenseMatrix,
}

impl CpqrResult {
    /// Original indices of the first `k` pivots.
    pub fn pivots(&self) -> &[usize] {
        &self.perm[..self.q_factor.rows()]
    }

    /// The leading `k × k` upper-triangular block.
    pub fn r1(&self) -> DenseMatrix {
        let k = self.r_factor.rows();
        DenseMatrix::from_fn(k, k, |i, j| self.r_factor[(i, j)])
    }
}

/// Column-pivoted Householder QR with the greedy largest-residual-norm rule.
///
/// Ties between equal residual norms go to the lowest original column index.
/// Residual norms are downdated after each step and recomputed from scratch
/// once the downdated square falls below 1% of the square last computed
/// exactly. Each reflector makes its diagonal entry of `R` nonnegative.
/// Rank-deficient input is fine: trailing diagonal entries are then ~0.
pub fn cpqr(b: &DenseMatrix) -> Result<CpqrResult> {
    let (k, n) = b.shape();
    if k > n {
        return Err(Error::invalid(format!("column-pivoted QR expects a wide matrix, got {k}x{n}")));
    }

    // Column-major working copy: work[c] holds the current column c.
    let mut work: Vec<Vec<f64>> = (0..n).map(|c| b.column(c)).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut norm_sq: Vec<f64> = work.iter().map(|c| sq_norm(c)).collect();
    let mut reference_sq = norm_sq.clone();
    let mut reflectors: Vec<(usize, Vec<f64>, f64)> = Vec::with_capacity(k);

    for j in 0..k {
        let mut p = j;
        for c in (j + 1)..n {
            if norm_sq[c] > norm_sq[p] || (norm_sq[c] == norm_sq[p] && perm[c] < perm[p]) {
                p = c;
            }
        }
        if p != j {
            work.swap(j, p);
            perm.swap(j, p);
            norm_sq.swap(j, p);
            reference_sq.swap(j, p);
        }

        if let Some((v, beta)) = householder(&work[j][j..]) {
            for col in work.iter_mut().skip(j) {
                apply_reflector(&v, beta, &mut col[j..]);
            }
            reflectors.push((j, v, beta));
        }
        // Exact zeros below the diagonal of the pivot column.
        for x in work[j][(j + 1)..].iter_mut() {
            *x = 0.0;
        }

        for c in (j + 1)..n {
            let top = work[c][j];
            let downdated = norm_sq[c] - top * top;
            if downdated < 1e-2 * reference_sq[c] {
                let fresh = sq_norm(&work[c][(j + 1)..]);
                norm_sq[c] = fresh;
                reference_sq[c] = fresh;
            } else {
                norm_sq[c] = downdated;
            }
        }
    }

    let r_factor = DenseMatrix::from_fn(k, n, |i, c| if i <= c { work[c][i] } else { 0.0 });

    // Q = H_0 H_1 ... H_{k-1}, accumulated by applying the reflectors to I
    // from the last one backwards.
    let mut q_cols: Vec<Vec<f64>> = (0..k).map(|c| (0..k).map(|i| if i == c { 1.0 } else { 0.0 }).collect()).collect();
    for (start, v, beta) in reflectors.iter().rev() {
        for col in q_cols.iter_mut() {
            apply_reflector(v, *beta, &mut col[*start..]);
        }
    }
    let q_factor = DenseMatrix::from_columns(&q_cols)?;

    Ok(CpqrResult { perm, q_factor, r_factor })
}

fn sq_norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// Reflector `H = I − β v vᵀ` with `H x = ‖x‖ e₁`. `None` when `x` already
/// has that form.
fn householder(x: &[f64]) -> Option<(Vec<f64>, f64)> {
    let tail_sq = sq_norm(&x[1..]);
    let x0 = x[0];
    if tail_sq == 0.0 && x0 >= 0.0 {
        return None;
    }
    let alpha = (x0 * x0 + tail_sq).sqrt();
    let mut v = x.to_vec();
    // v₀ = x₀ − α, computed without cancellation when x₀ > 0.
    v[0] = if x0 <= 0.0 { x0 - alpha } else { -tail_sq / (x0 + alpha) };
    let vtv = v[0] * v[0] + tail_sq;
    Some((v, 2.0 / vtv))
}

fn apply_reflector(v: &[f64], beta: f64, x: &mut [f64]) {
    let d: f64 = v.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
    let s = beta * d;
    if s != 0.0 {
        for (xi, vi) in x.iter_mut().zip(v) {
            *xi -= s * vi;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::jacobi_svd_small;
    use crate::rng;
    use rand_distr::{Distribution, StandardNormal};

    fn check_invariants(b: &DenseMatrix, f: &CpqrResult) {
        let (k, n) = b.shape();
        assert!(f.q_factor.orthonormality_defect() < 1e-10);
        for i in 0..k {
            for j in 0..i.min(n) {
                assert_eq!(f.r_factor[(i, j)], 0.0);
            }
        }
        let bp = b.select_columns(&f.perm);
        let err = f.q_factor.matmul(&f.r_factor).unwrap().sub(&bp).unwrap().frobenius_norm();
        assert!(err <= 1e-10 * b.frobenius_norm().max(1e-300), "reconstruction {err}");
        let scale = b.frobenius_norm();
        for j in 0..k {
            let diag = f.r_factor[(j, j)];
            assert!(diag >= 0.0);
            for l in (j + 1)..n {
                let tail: f64 = (j..k).map(|i| f.r_factor[(i, l)].powi(2)).sum::<f64>().sqrt();
                assert!(diag >= tail - 1e-12 * scale, "pivot property at ({j},{l})");
            }
        }
        for j in 1..k {
            assert!(f.r_factor[(j - 1, j - 1)] >= f.r_factor[(j, j)] - 1e-12 * scale);
        }
        let mut sorted = f.perm.clone();
        sorted.sort_unstable();
        assert!(sorted.iter().enumerate().all(|(i, &p)| i == p));
    }

    #[test]
    fn tie_goes_to_lowest_index() {
        let b = DenseMatrix::from_rows(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]).unwrap();
        let f = cpqr(&b).unwrap();
        assert_eq!(&f.perm[..2], &[0, 1]);
        let r1 = f.r1();
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((r1[(i, j)].abs() - expect).abs() < 1e-15);
            }
        }
        check_invariants(&b, &f);
    }

    #[test]
    fn largest_column_first() {
        let b = DenseMatrix::from_rows(&[vec![0.0, 2.0], vec![1.0, 0.0]]).unwrap();
        let f = cpqr(&b).unwrap();
        assert_eq!(f.perm, vec![1, 0]);
        assert!((f.r_factor[(0, 0)].abs() - 2.0).abs() < 1e-15);
        assert!((f.r_factor[(1, 1)].abs() - 1.0).abs() < 1e-15);
        check_invariants(&b, &f);
    }

    #[test]
    fn random_wide_matrices() {
        let mut r = rng::seeded(99);
        for &(k, n) in &[(1, 1), (1, 7), (3, 3), (4, 50), (6, 200)] {
            let b = DenseMatrix::from_fn(k, n, |_, _| StandardNormal.sample(&mut r));
            let f = cpqr(&b).unwrap();
            check_invariants(&b, &f);
        }
    }

    #[test]
    fn gu_eisenstat_bound_small_case() {
        // Against a full SVD of B: σ_min(R₁) ≥ σ_k(B) / (2^k √n).
        let mut r = rng::seeded(5);
        let b = DenseMatrix::from_fn(4, 50, |_, _| StandardNormal.sample(&mut r));
        let f = cpqr(&b).unwrap();
        let gram = b.matmul(&b.transpose()).unwrap();
        let sigma_k = jacobi_svd_small(&gram).unwrap().sigma_min().sqrt();
        let r1_min = jacobi_svd_small(&f.r1()).unwrap().sigma_min();
        assert!(r1_min >= sigma_k / (16.0 * 50f64.sqrt()));
    }

    #[test]
    fn rank_deficient_and_zero_columns() {
        let b = DenseMatrix::from_rows(&[vec![1.0, 2.0, 0.0, 3.0], vec![1.0, 2.0, 0.0, 3.0], vec![1.0, 2.0, 0.0, 3.0]])
            .unwrap();
        let f = cpqr(&b).unwrap();
        assert_eq!(f.perm[0], 3);
        assert!(f.r_factor[(1, 1)].abs() < 1e-12);
        check_invariants(&b, &f);
    }

    #[test]
    fn negative_leading_entry() {
        let b = DenseMatrix::from_rows(&[vec![-3.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let f = cpqr(&b).unwrap();
        assert_eq!(f.perm[0], 0);
        assert!((f.r_factor[(0, 0)] - 3.0).abs() < 1e-15);
        check_invariants(&b, &f);
    }

    #[test]
    fn tall_input_rejected() {
        assert!(cpqr(&DenseMatrix::zeros(3, 2)).is_err());
    }
}
