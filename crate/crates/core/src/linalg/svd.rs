use super::{dot, norm2, DenseMatrix};
use crate::error::{Error, Result};

/// Largest dimension [`jacobi_svd_small`] accepts.
pub const DEFAULT_SVD_MAX_DIM: usize = 64;

const MAX_SWEEPS: usize = 80;

/// `input = left · diag(singular_values) · rightᵀ`.
#[derive(Clone, Debug)]
pub struct SvdResult {
    pub left: DenseMatrix,
    pub singular_values: Vec<f64>,
    pub right: DenseMatrix,
}

impl SvdResult {
    pub fn reconstruct(&self) -> DenseMatrix {
        let n = self.singular_values.len();
        let scaled = DenseMatrix::from_fn(n, n, |i, j| self.left[(i, j)] * self.singular_values[j]);
        scaled.matmul(&self.right.transpose()).expect("square factors of equal size")
    }

    pub fn sigma_min(&self) -> f64 {
        *self.singular_values.last().expect("non-empty")
    }
}

/// Full SVD of a small square matrix by one-sided (Hestenes) Jacobi rotations.
pub fn jacobi_svd_small(b: &DenseMatrix) -> Result<SvdResult> {
    jacobi_svd_with_cap(b, DEFAULT_SVD_MAX_DIM)
}

/// [`jacobi_svd_small`] with an explicit size cap.
pub fn jacobi_svd_with_cap(b: &DenseMatrix, max_dim: usize) -> Result<SvdResult> {
    if !b.is_square() {
        return Err(Error::invalid(format!("Jacobi SVD needs a square matrix, got {}x{}", b.rows(), b.cols())));
    }
    let n = b.rows();
    if n > max_dim {
        return Err(Error::invalid(format!("Jacobi SVD is limited to {max_dim}x{max_dim}, got {n}x{n}")));
    }

    // Work on columns: cols[j] is column j of B, rotated in place until all
    // pairs are orthogonal. The same rotations applied to the identity give V.
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| b.column(j)).collect();
    let mut right: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect()).collect();

    let mut converged = n < 2;
    let mut sweeps = 0;
    let mut worst = 0.0;
    while !converged && sweeps < MAX_SWEEPS {
        sweeps += 1;
        converged = true;
        worst = 0.0f64;
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if gamma == 0.0 || alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let off = gamma.abs() / (alpha * beta).sqrt();
                worst = worst.max(off);
                if off <= f64::EPSILON {
                    continue;
                }
                converged = false;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, c, s);
                rotate(&mut right, p, q, c, s);
            }
        }
    }
    if !converged {
        return Err(Error::Convergence { what: "one-sided Jacobi SVD", iterations: sweeps, residuals: vec![worst] });
    }

    let mut sigma: Vec<f64> = cols.iter().map(|c| norm2(c)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]).then(i.cmp(&j)));
    sigma = order.iter().map(|&i| sigma[i]).collect();
    let cols: Vec<Vec<f64>> = order.iter().map(|&i| cols[i].clone()).collect();
    let right: Vec<Vec<f64>> = order.iter().map(|&i| right[i].clone()).collect();

    // Left vectors: normalized columns, with negligible ones replaced by
    // unit vectors and everything re-orthonormalized in order.
    let sigma_max = sigma.first().copied().unwrap_or(0.0);
    let negligible = sigma_max * 1e-13 * n as f64;
    let mut left: Vec<Vec<f64>> = Vec::with_capacity(n);
    for (j, col) in cols.iter().enumerate() {
        let u = if sigma[j] > negligible && sigma[j] > 0.0 {
            let u: Vec<f64> = col.iter().map(|v| v / sigma[j]).collect();
            orthonormalize_against(&left, u)
        } else {
            None
        };
        let u = u.unwrap_or_else(|| {
            // Negligible direction: take the coordinate vector with the
            // largest component outside the current span.
            (0..n)
                .filter_map(|i| {
                    let e: Vec<f64> = (0..n).map(|r| if r == i { 1.0 } else { 0.0 }).collect();
                    orthonormalize_against_raw(&left, e)
                })
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .map(|(mut v, nv)| {
                    v.iter_mut().for_each(|x| *x /= nv);
                    v
                })
                .expect("an orthonormal basis can always be completed")
        });
        left.push(u);
    }

    Ok(SvdResult {
        left: DenseMatrix::from_columns(&left)?,
        singular_values: sigma,
        right: DenseMatrix::from_columns(&right)?,
    })
}

/// Two passes of Gram-Schmidt; `None` when the vector lies (numerically) in
/// the span of `basis`.
fn orthonormalize_against(basis: &[Vec<f64>], u: Vec<f64>) -> Option<Vec<f64>> {
    let (mut v, nv) = orthonormalize_against_raw(basis, u)?;
    if nv < 0.5 {
        return None;
    }
    v.iter_mut().for_each(|x| *x /= nv);
    Some(v)
}

fn orthonormalize_against_raw(basis: &[Vec<f64>], mut u: Vec<f64>) -> Option<(Vec<f64>, f64)> {
    for _ in 0..2 {
        for prev in basis {
            let d = dot(prev, &u);
            super::axpy(-d, prev, &mut u);
        }
    }
    let nu = norm2(&u);
    (nu > 1e-8).then_some((u, nu))
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (head, tail) = cols.split_at_mut(q);
    let cp = &mut head[p];
    let cq = &mut tail[0];
    for (a, b) in cp.iter_mut().zip(cq.iter_mut()) {
        let x = *a;
        let y = *b;
        *a = c * x - s * y;
        *b = s * x + c * y;
    }
}
