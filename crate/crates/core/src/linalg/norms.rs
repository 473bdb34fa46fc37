use rand_distr::{Distribution, StandardNormal};

use super::{axpy, dot, jacobi_svd_with_cap, norm2, DenseMatrix, LinearOperator};
use crate::error::{Error, Result};
use crate::rng;

#[derive(Clone, Debug)]
pub struct PowerOptions {
    /// Stop when `‖MᵀM x − θ x‖ ≤ tol · θ` for the Rayleigh quotient `θ`.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for PowerOptions {
    fn default() -> Self {
        Self { tol: 1e-6, max_iter: 5000, seed: 0x9041_77e1_0000_0001 }
    }
}

/// Largest singular value of `m` by power iteration on `MᵀM`.
pub fn spectral_norm(m: &dyn LinearOperator) -> Result<f64> {
    spectral_norm_with(m, &PowerOptions::default())
}

pub fn spectral_norm_with(m: &dyn LinearOperator, opts: &PowerOptions) -> Result<f64> {
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut r = rng::seeded(opts.seed);
    let mut x: Vec<f64> = (0..cols).map(|_| StandardNormal.sample(&mut r)).collect();
    let nx = norm2(&x);
    x.iter_mut().for_each(|v| *v /= nx);
    let mut mx = vec![0.0; rows];
    let mut y = vec![0.0; cols];
    let mut last_residual = f64::INFINITY;
    for _ in 0..opts.max_iter {
        m.apply(&x, &mut mx);
        m.apply_transpose(&mx, &mut y);
        let theta = dot(&x, &y);
        if theta <= 0.0 {
            // MᵀM x = 0 for a generic x: the operator vanishes.
            if norm2(&y) == 0.0 {
                return Ok(0.0);
            }
        }
        let mut res = y.clone();
        axpy(-theta, &x, &mut res);
        last_residual = norm2(&res);
        if last_residual <= opts.tol * theta {
            return Ok(theta.max(0.0).sqrt());
        }
        let ny = norm2(&y);
        if ny == 0.0 {
            return Ok(0.0);
        }
        x.iter_mut().zip(&y).for_each(|(a, b)| *a = b / ny);
    }
    Err(Error::Convergence { what: "power iteration", iterations: opts.max_iter, residuals: vec![last_residual] })
}

/// The operator `A − B`.
pub struct Difference<A, B> {
    pub left: A,
    pub right: B,
}

impl<A: LinearOperator, B: LinearOperator> LinearOperator for Difference<A, B> {
    fn nrows(&self) -> usize {
        self.left.nrows()
    }
    fn ncols(&self) -> usize {
        self.left.ncols()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let mut tmp = vec![0.0; y.len()];
        self.left.apply(x, y);
        self.right.apply(x, &mut tmp);
        y.iter_mut().zip(&tmp).for_each(|(a, b)| *a -= b);
    }
    fn apply_transpose(&self, x: &[f64], y: &mut [f64]) {
        let mut tmp = vec![0.0; y.len()];
        self.left.apply_transpose(x, y);
        self.right.apply_transpose(x, &mut tmp);
        y.iter_mut().zip(&tmp).for_each(|(a, b)| *a -= b);
    }
}

/// `‖WWᵀ − VVᵀ‖₂` for two `n × k` matrices with orthonormal columns,
/// evaluated as `sqrt(1 − σ_min(WᵀV)²)`.
pub fn subspace_projector_distance(w: &DenseMatrix, v: &DenseMatrix) -> Result<f64> {
    if w.shape() != v.shape() {
        return Err(Error::invalid(format!("basis shapes differ: {:?} vs {:?}", w.shape(), v.shape())));
    }
    if w.cols() > w.rows() {
        return Err(Error::invalid("more basis vectors than dimensions"));
    }
    for (name, m) in [("first", w), ("second", v)] {
        let defect = m.orthonormality_defect();
        if defect > 1e-8 {
            return Err(Error::invalid(format!("{name} basis is not orthonormal (defect {defect:.3e})")));
        }
    }
    let cross = w.transpose_matmul(v)?;
    let svd = jacobi_svd_with_cap(&cross, usize::MAX)?;
    let s = svd.sigma_min().min(1.0);
    Ok((1.0 - s * s).max(0.0).sqrt())
}
