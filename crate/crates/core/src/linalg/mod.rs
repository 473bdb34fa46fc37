//! Dense linear algebra and symmetric eigensolvers.

mod dense;
mod eigen;
mod lanczos;
mod norms;
mod svd;

pub use dense::DenseMatrix;
pub use eigen::{sym_eigen_dense, Eigenpairs};
pub use lanczos::{top_k_eigen_sparse, LanczosOptions};
pub use norms::{spectral_norm, spectral_norm_with, subspace_projector_distance, Difference, PowerOptions};
pub use svd::{jacobi_svd_small, jacobi_svd_with_cap, SvdResult, DEFAULT_SVD_MAX_DIM};

/// A real linear map `R^ncols -> R^nrows` that can be applied and transposed.
///
/// Symmetric operators (graph adjacencies) implement `apply_transpose` by
/// delegating to `apply`.
pub trait LinearOperator: Sync {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    /// `y = A x`; `y` is overwritten.
    fn apply(&self, x: &[f64], y: &mut [f64]);
    /// `y = Aᵀ x`; `y` is overwritten.
    fn apply_transpose(&self, x: &[f64], y: &mut [f64]);
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn nrows(&self) -> usize {
        (**self).nrows()
    }
    fn ncols(&self) -> usize {
        (**self).ncols()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        (**self).apply(x, y)
    }
    fn apply_transpose(&self, x: &[f64], y: &mut [f64]) {
        (**self).apply_transpose(x, y)
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}
