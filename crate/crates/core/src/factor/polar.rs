use crate::error::{Error, Result};
use crate::linalg::{jacobi_svd_small, DenseMatrix};

/// `B = U H` with `U` orthogonal and `H` symmetric positive semi-definite.
#[derive(Clone, Debug)]
pub struct PolarResult {
    pub orthogonal_factor: DenseMatrix,
    pub psd_factor: DenseMatrix,
}

/// Polar factorization through the SVD `B = L Σ Rᵀ`: `U = L Rᵀ`,
/// `H = R Σ Rᵀ`.
///
/// `U` is the orthogonal matrix nearest to `B` in the Frobenius norm. When
/// `B` is singular that nearest matrix is not unique and the one induced by
/// the computed SVD is returned.
pub fn polar(b: &DenseMatrix) -> Result<PolarResult> {
    if !b.is_square() {
        return Err(Error::invalid(format!(
            "polar factorization needs a square matrix, got {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    let svd = jacobi_svd_small(b)?;
    let n = b.rows();
    let orthogonal_factor = svd.left.matmul(&svd.right.transpose())?;
    let mut psd_factor = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v: f64 = (0..n).map(|l| svd.right[(i, l)] * svd.singular_values[l] * svd.right[(j, l)]).sum();
            psd_factor[(i, j)] = v;
            psd_factor[(j, i)] = v;
        }
    }
    Ok(PolarResult { orthogonal_factor, psd_factor })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sym_eigen_dense;
    use crate::rng;
    use rand_distr::{Distribution, StandardNormal};

    fn check(b: &DenseMatrix, p: &PolarResult) {
        assert!(p.orthogonal_factor.orthonormality_defect() < 1e-10);
        assert!(p.psd_factor.asymmetry() <= 1e-12 * p.psd_factor.frobenius_norm().max(1.0));
        let eig = sym_eigen_dense(&p.psd_factor).unwrap();
        assert!(eig.values.iter().all(|&l| l >= -1e-10));
        let err = p.orthogonal_factor.matmul(&p.psd_factor).unwrap().sub(b).unwrap().frobenius_norm();
        assert!(err <= 1e-10 * b.frobenius_norm().max(1e-300));
    }

    #[test]
    fn rotation_is_its_own_orthogonal_factor() {
        let t: f64 = 0.7;
        let b = DenseMatrix::from_rows(&[vec![t.cos(), -t.sin()], vec![t.sin(), t.cos()]]).unwrap();
        let p = polar(&b).unwrap();
        assert!(p.orthogonal_factor.sub(&b).unwrap().frobenius_norm() < 1e-14);
        assert!(p.psd_factor.sub(&DenseMatrix::identity(2)).unwrap().frobenius_norm() < 1e-14);
        check(&b, &p);
    }

    #[test]
    fn positive_diagonal() {
        let b = DenseMatrix::from_diag(&[3.0, 2.0]);
        let p = polar(&b).unwrap();
        assert!(p.orthogonal_factor.sub(&DenseMatrix::identity(2)).unwrap().frobenius_norm() < 1e-14);
        assert!(p.psd_factor.sub(&b).unwrap().frobenius_norm() < 1e-14);
    }

    #[test]
    fn random_and_singular_inputs() {
        let mut r = rng::seeded(8);
        for n in 1..8 {
            let b = DenseMatrix::from_fn(n, n, |_, _| StandardNormal.sample(&mut r));
            check(&b, &polar(&b).unwrap());
        }
        let singular = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        check(&singular, &polar(&singular).unwrap());
        assert!(polar(&DenseMatrix::zeros(2, 3)).is_err());
    }
}
