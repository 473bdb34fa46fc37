//! Block Lanczos with full reorthogonalization and thick restarts.
//!
//! The search space is grown a block at a time from the residuals of the
//! leading Ritz pairs, every new vector is orthogonalized against the whole
//! basis (twice), and Rayleigh-Ritz on the explicitly projected matrix gives
//! the eigen-estimates. Starting from a random block of size `k` lets the
//! method resolve eigenvalues of multiplicity up to `k`, which matters for
//! graphs with several connected components. When the basis reaches its size
//! cap it is compressed to the leading Ritz vectors and growth continues.

use rand_distr::{Distribution, StandardNormal};

use super::{axpy, dot, norm2, sym_eigen_dense, DenseMatrix, Eigenpairs, LinearOperator};
use crate::error::{Error, Result};
use crate::rng;

#[derive(Clone, Debug)]
pub struct LanczosOptions {
    /// A pair is converged when `‖A v − λ v‖ ≤ tol · max(1, |λ|)`.
    pub tol: f64,
    /// Cap on expansion steps; `None` means `10 · n`.
    pub max_iter: Option<usize>,
    /// Vectors added per step; `None` means `k`.
    pub block_size: Option<usize>,
    /// Basis size that triggers a restart; `None` picks `max(4k + 2b, 60)`.
    pub max_basis: Option<usize>,
    /// Seed for the random starting block.
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self { tol: 1e-8, max_iter: None, block_size: None, max_basis: None, seed: 0x5eed_1a4c_2b3d_0001 }
    }
}

/// The `k` algebraically largest eigenpairs of a symmetric operator.
pub fn top_k_eigen_sparse(op: &dyn LinearOperator, k: usize, opts: &LanczosOptions) -> Result<Eigenpairs> {
    let n = op.nrows();
    if op.ncols() != n {
        return Err(Error::invalid(format!("operator is {}x{}, not square", n, op.ncols())));
    }
    if k == 0 || k > n {
        return Err(Error::invalid(format!("cannot take k={k} eigenpairs of an order-{n} operator")));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let block = opts.block_size.unwrap_or(k).clamp(1, n);
    let max_basis = opts.max_basis.unwrap_or((4 * k + 2 * block).max(60)).max(k + block).min(n);
    let max_iter = opts.max_iter.unwrap_or(10 * n);

    let mut space = Subspace::new(op, n);
    let mut rng = rng::seeded_stream(opts.seed, rng::stream::EIGEN_START);
    let mut random_vector = move || -> Vec<f64> { (0..n).map(|_| StandardNormal.sample(&mut rng)).collect() };

    let start: Vec<Vec<f64>> = (0..block).map(|_| random_vector()).collect();
    space.extend(start);

    let mut iterations = 0;
    loop {
        let m = space.len();
        let ritz = space.rayleigh_ritz()?;
        let wanted = m.min(k + block);
        let pairs = space.ritz_pairs(&ritz, wanted);
        let converged: Vec<bool> = pairs.iter().map(|p| p.residual_norm <= opts.tol * p.value.abs().max(1.0)).collect();

        if m >= k && converged[..k].iter().all(|&c| c) {
            let values = pairs[..k].iter().map(|p| p.value).collect();
            let columns: Vec<Vec<f64>> = pairs.into_iter().take(k).map(|p| p.vector).collect();
            return Ok(Eigenpairs { values, vectors: DenseMatrix::from_columns(&columns)? });
        }
        if m == n || iterations >= max_iter {
            return Err(Error::Convergence {
                what: "block Lanczos",
                iterations,
                residuals: pairs.iter().take(k).map(|p| p.residual_norm).collect(),
            });
        }
        iterations += 1;

        let mut candidates: Vec<Vec<f64>> =
            pairs.iter().zip(&converged).filter(|(_, &c)| !c).map(|(p, _)| p.residual.clone()).take(block).collect();
        if candidates.is_empty() {
            candidates.push(random_vector());
        }

        if m + candidates.len() > max_basis {
            let keep = (max_basis - candidates.len()).max(k).min(m);
            space.compress(&ritz, keep);
        }
        let added = space.extend(candidates);
        if added == 0 {
            // The residuals were already in the span; perturb with fresh directions.
            let fresh: Vec<Vec<f64>> = (0..block).map(|_| random_vector()).collect();
            if space.len() + fresh.len() > max_basis {
                let ritz = space.rayleigh_ritz()?;
                let keep = (max_basis - fresh.len()).max(k).min(space.len());
                space.compress(&ritz, keep);
            }
            space.extend(fresh);
        }
    }
}

struct RitzPair {
    value: f64,
    vector: Vec<f64>,
    residual: Vec<f64>,
    residual_norm: f64,
}

/// Orthonormal basis `V`, its image `AV`, and the projection `VᵀAV`.
struct Subspace<'a> {
    op: &'a dyn LinearOperator,
    n: usize,
    basis: Vec<Vec<f64>>,
    images: Vec<Vec<f64>>,
    projected: Vec<Vec<f64>>,
}

impl<'a> Subspace<'a> {
    fn new(op: &'a dyn LinearOperator, n: usize) -> Self {
        Self { op, n, basis: Vec::new(), images: Vec::new(), projected: Vec::new() }
    }

    fn len(&self) -> usize {
        self.basis.len()
    }

    /// Orthonormalizes each candidate against the basis and appends the ones
    /// that carry a new direction. Returns how many were appended.
    fn extend(&mut self, candidates: Vec<Vec<f64>>) -> usize {
        let mut added = 0;
        for mut v in candidates {
            if self.basis.len() == self.n {
                break;
            }
            let original = norm2(&v);
            if original == 0.0 {
                continue;
            }
            let mut current = original;
            for _ in 0..3 {
                for q in &self.basis {
                    let d = dot(q, &v);
                    axpy(-d, q, &mut v);
                }
                let after = norm2(&v);
                let ratio = after / current;
                current = after;
                if ratio > 0.5 {
                    break;
                }
            }
            if current <= 1e-10 * original {
                continue;
            }
            v.iter_mut().for_each(|x| *x /= current);
            let mut image = vec![0.0; self.n];
            self.op.apply(&v, &mut image);

            let m = self.basis.len();
            let column: Vec<f64> = self.basis.iter().map(|q| dot(q, &image)).collect();
            for (row, &c) in self.projected.iter_mut().zip(&column) {
                row.push(c);
            }
            let mut last = column;
            last.push(dot(&v, &image));
            self.projected.push(last);
            debug_assert_eq!(self.projected.len(), m + 1);

            self.basis.push(v);
            self.images.push(image);
            added += 1;
        }
        added
    }

    fn rayleigh_ritz(&self) -> Result<Eigenpairs> {
        let m = self.len();
        let t = DenseMatrix::from_fn(m, m, |i, j| 0.5 * (self.projected[i][j] + self.projected[j][i]));
        sym_eigen_dense(&t)
    }

    fn combine(&self, vectors: &[Vec<f64>], coeffs: &DenseMatrix, col: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (j, v) in vectors.iter().enumerate() {
            let c = coeffs[(j, col)];
            if c != 0.0 {
                axpy(c, v, &mut out);
            }
        }
        out
    }

    fn ritz_pairs(&self, ritz: &Eigenpairs, count: usize) -> Vec<RitzPair> {
        (0..count)
            .map(|i| {
                let value = ritz.values[i];
                let vector = self.combine(&self.basis, &ritz.vectors, i);
                let mut residual = self.combine(&self.images, &ritz.vectors, i);
                axpy(-value, &vector, &mut residual);
                let residual_norm = norm2(&residual);
                RitzPair { value, vector, residual, residual_norm }
            })
            .collect()
    }

    /// Thick restart: keep only the leading `keep` Ritz vectors.
    fn compress(&mut self, ritz: &Eigenpairs, keep: usize) {
        let basis: Vec<Vec<f64>> = (0..keep).map(|i| self.combine(&self.basis, &ritz.vectors, i)).collect();
        let images: Vec<Vec<f64>> = (0..keep).map(|i| self.combine(&self.images, &ritz.vectors, i)).collect();
        self.basis = basis;
        self.images = images;
        self.projected =
            (0..keep).map(|i| (0..keep).map(|j| if i == j { ritz.values[i] } else { 0.0 }).collect()).collect();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sym_eigen_dense;
    use crate::rng;
    use rand::Rng;

    fn random_sparse_symmetric(n: usize, density: f64, seed: u64) -> DenseMatrix {
        let mut r = rng::seeded(seed);
        let mut a = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                if r.random::<f64>() < density {
                    let v: f64 = StandardNormal.sample(&mut r);
                    a[(i, j)] = v;
                    a[(j, i)] = v;
                }
            }
        }
        a
    }

    #[test]
    fn matches_dense_oracle() {
        let a = random_sparse_symmetric(200, 0.05, 3);
        let dense = sym_eigen_dense(&a).unwrap();
        let top = top_k_eigen_sparse(&a, 5, &LanczosOptions::default()).unwrap();
        for i in 0..5 {
            assert!((top.values[i] - dense.values[i]).abs() < 1e-7, "pair {i}");
        }
        assert!(top.vectors.orthonormality_defect() < 1e-10);
    }

    #[test]
    fn full_spectrum_when_k_equals_n() {
        let a = random_sparse_symmetric(10, 0.4, 5);
        let dense = sym_eigen_dense(&a).unwrap();
        let all = top_k_eigen_sparse(&a, 10, &LanczosOptions::default()).unwrap();
        for (x, y) in all.values.iter().zip(&dense.values) {
            assert!((x - y).abs() < 1e-7);
        }
    }

    #[test]
    fn restarts_still_converge() {
        let a = random_sparse_symmetric(150, 0.08, 9);
        let dense = sym_eigen_dense(&a).unwrap();
        let opts = LanczosOptions { max_basis: Some(12), ..Default::default() };
        let top = top_k_eigen_sparse(&a, 3, &opts).unwrap();
        for i in 0..3 {
            assert!((top.values[i] - dense.values[i]).abs() < 1e-7);
        }
    }

    #[test]
    fn repeated_top_eigenvalue() {
        // Block-diagonal with three identical blocks: every eigenvalue has multiplicity 3.
        let blk = random_sparse_symmetric(20, 0.3, 1);
        let a = DenseMatrix::from_fn(60, 60, |i, j| if i / 20 == j / 20 { blk[(i % 20, j % 20)] } else { 0.0 });
        let dense = sym_eigen_dense(&a).unwrap();
        let top = top_k_eigen_sparse(&a, 3, &LanczosOptions::default()).unwrap();
        for i in 0..3 {
            assert!((top.values[i] - dense.values[0]).abs() < 1e-7);
        }
    }

    #[test]
    fn rejects_bad_k() {
        let a = DenseMatrix::identity(4);
        assert!(top_k_eigen_sparse(&a, 5, &LanczosOptions::default()).is_err());
        assert!(top_k_eigen_sparse(&a, 0, &LanczosOptions::default()).is_err());
    }

    #[test]
    fn reports_non_convergence() {
        let a = random_sparse_symmetric(100, 0.1, 2);
        let opts = LanczosOptions { max_iter: Some(1), ..Default::default() };
        match top_k_eigen_sparse(&a, 4, &opts) {
            Err(Error::Convergence { residuals, .. }) => assert_eq!(residuals.len(), 4),
            other => panic!("expected convergence error, got {other:?}"),
        }
    }
}
