use super::DenseMatrix;
use crate::error::{Error, Result};

/// Eigenvalues sorted descending with their orthonormal eigenvectors.
///
/// Column `i` of `vectors` pairs with `values[i]`.
#[derive(Clone, Debug)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
}

impl Eigenpairs {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Keeps the leading `k` pairs.
    pub fn truncate(self, k: usize) -> Eigenpairs {
        let k = k.min(self.values.len());
        let cols: Vec<usize> = (0..k).collect();
        Eigenpairs { values: self.values[..k].to_vec(), vectors: self.vectors.select_columns(&cols) }
    }
}

const QL_MAX_SWEEPS: usize = 64;

/// All eigenpairs of a symmetric matrix by Householder tridiagonalization
/// followed by the implicit QL algorithm.
///
/// Eigenvalues come back in algebraically descending order.
pub fn sym_eigen_dense(a: &DenseMatrix) -> Result<Eigenpairs> {
    if !a.is_square() {
        return Err(Error::invalid(format!("eigendecomposition needs a square matrix, got {}x{}", a.rows(), a.cols())));
    }
    let scale = a.frobenius_norm();
    if a.asymmetry() > 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::invalid("matrix is not symmetric"));
    }
    let n = a.rows();
    let mut v = a.as_slice().to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(n, &mut v, &mut d, &mut e);
    tridiagonal_ql(n, &mut v, &mut d, &mut e)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[j].total_cmp(&d[i]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = DenseMatrix::from_fn(n, n, |r, c| v[r * n + order[c]]);
    Ok(Eigenpairs { values, vectors })
}

/// Symmetric Householder reduction to tridiagonal form. On return `v` holds
/// the accumulated orthogonal transformation, `d` the diagonal and `e[1..]`
/// the subdiagonal.
fn tridiagonalize(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    let idx = |r: usize, c: usize| r * n + c;
    for j in 0..n {
        d[j] = v[idx(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for dk in d.iter().take(i) {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[idx(i - 1, j)];
                v[idx(i, j)] = 0.0;
                v[idx(j, i)] = 0.0;
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[idx(j, i)] = f;
                g = e[j] + v[idx(j, j)] * f;
                for k in (j + 1)..i {
                    g += v[idx(k, j)] * d[k];
                    e[k] += v[idx(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[idx(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[idx(i - 1, j)];
                v[idx(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    for i in 0..n.saturating_sub(1) {
        v[idx(n - 1, i)] = v[idx(i, i)];
        v[idx(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[idx(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[idx(k, i + 1)] * v[idx(k, j)];
                }
                for k in 0..=i {
                    v[idx(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[idx(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[idx(n - 1, j)];
        v[idx(n - 1, j)] = 0.0;
    }
    v[idx(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// Implicit-shift QL iteration on the tridiagonal `(d, e)`, rotating the
/// columns of `v` along.
fn tridiagonal_ql(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let idx = |r: usize, c: usize| r * n + c;
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > QL_MAX_SWEEPS {
                    return Err(Error::Convergence {
                        what: "tridiagonal QL",
                        iterations: iter - 1,
                        residuals: vec![e[l].abs()],
                    });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let vk1 = v[idx(k, i + 1)];
                        let vk = v[idx(k, i)];
                        v[idx(k, i + 1)] = s * vk + c * vk1;
                        v[idx(k, i)] = c * vk - s * vk1;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use rand_distr::{Distribution, StandardNormal};

    fn random_symmetric(n: usize, seed: u64) -> DenseMatrix {
        let mut r = rng::seeded(seed);
        let b = DenseMatrix::from_fn(n, n, |_, _| StandardNormal.sample(&mut r));
        DenseMatrix::from_fn(n, n, |i, j| 0.5 * (b[(i, j)] + b[(j, i)]))
    }

    fn reconstruct(e: &Eigenpairs) -> DenseMatrix {
        let lam = DenseMatrix::from_diag(&e.values);
        e.vectors.matmul(&lam).unwrap().matmul(&e.vectors.transpose()).unwrap()
    }

    #[test]
    fn diagonal_sorted_descending() {
        let a = DenseMatrix::from_diag(&[3.0, 1.0, 2.0]);
        let e = sym_eigen_dense(&a).unwrap();
        assert_eq!(e.values, vec![3.0, 2.0, 1.0]);
        // columns are permuted identity columns (up to sign)
        let expect = [0usize, 2, 1];
        for (c, &row) in expect.iter().enumerate() {
            assert!((e.vectors[(row, c)].abs() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn two_by_two() {
        let a = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let e = sym_eigen_dense(&a).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v0 = e.vectors.column(0);
        let v1 = e.vectors.column(1);
        assert!((v0[0].abs() - s).abs() < 1e-14 && (v0[0] - v0[1]).abs() < 1e-14);
        assert!((v1[0].abs() - s).abs() < 1e-14 && (v1[0] + v1[1]).abs() < 1e-14);
    }

    #[test]
    fn random_reconstruction_and_residuals() {
        for seed in 0..5 {
            let a = random_symmetric(20, seed);
            let e = sym_eigen_dense(&a).unwrap();
            let err = reconstruct(&e).sub(&a).unwrap().frobenius_norm();
            assert!(err <= 1e-8 * a.frobenius_norm(), "reconstruction error {err}");
            assert!(e.vectors.orthonormality_defect() <= 1e-10);
            assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
            let norm = a.frobenius_norm();
            for i in 0..20 {
                let v = e.vectors.column(i);
                let av: Vec<f64> = (0..20).map(|r| crate::linalg::dot(a.row(r), &v)).collect();
                let res: f64 = av.iter().zip(&v).map(|(x, y)| (x - e.values[i] * y).powi(2)).sum::<f64>().sqrt();
                assert!(res <= 1e-8 * norm);
            }
        }
    }

    #[test]
    fn degenerate_and_tiny_cases() {
        let e = sym_eigen_dense(&DenseMatrix::from_vec(1, 1, vec![-4.0]).unwrap()).unwrap();
        assert_eq!(e.values, vec![-4.0]);
        let e = sym_eigen_dense(&DenseMatrix::zeros(4, 4)).unwrap();
        assert!(e.values.iter().all(|&v| v == 0.0));
        assert!(e.vectors.orthonormality_defect() < 1e-14);
        let e = sym_eigen_dense(&DenseMatrix::identity(5).scale(2.0)).unwrap();
        assert!(e.values.iter().all(|&v| (v - 2.0).abs() < 1e-15));
    }

    #[test]
    fn rejects_non_square_and_asymmetric() {
        let a = DenseMatrix::zeros(2, 3);
        assert!(matches!(sym_eigen_dense(&a), Err(Error::InvalidInput(_))));
        let b = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(sym_eigen_dense(&b), Err(Error::InvalidInput(_))));
    }
}
