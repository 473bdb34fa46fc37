use rand::seq::SliceRandom;
use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::factor::polar;
use crate::linalg::{sym_eigen_dense, DenseMatrix};
use crate::rng::uniform01;

const MAX_ATTEMPTS: usize = 50;
const CONE_TOL: f64 = 1e-12;

/// `(η, μ, δ)`: in-cone fraction, cone aperture, outside-norm ratio.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OcsParams {
    pub eta: f64,
    pub mu: f64,
    pub delta: f64,
}

/// Points with orthogonal cone structure whose `n × k` matrix has
/// orthonormal columns, like an eigenvector block.
#[derive(Clone, Debug)]
pub struct OcsSample {
    /// Row `i` is `x_i`.
    pub points: DenseMatrix,
    /// Column `j` is the cone center `q_j`.
    pub centers: DenseMatrix,
    /// Cone of each generated in-cone point, `None` for the rest.
    pub in_cone: Vec<Option<usize>>,
    pub params: OcsParams,
}

impl OcsSample {
    /// `x·q/‖x‖` for point `i` and center `j`.
    pub fn cosine(&self, i: usize, j: usize) -> f64 {
        let x = self.points.row(i);
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        (0..x.len()).map(|l| x[l] * self.centers[(l, j)]).sum::<f64>() / norm
    }

    /// Cones containing point `i`.
    pub fn cones_of(&self, i: usize) -> Vec<usize> {
        let threshold = 1.0 - self.params.mu - CONE_TOL;
        (0..self.centers.cols()).filter(|&j| self.cosine(i, j) >= threshold).collect()
    }

    fn norm(&self, i: usize) -> f64 {
        self.points.row(i).iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Largest point norm, `c_M`.
    pub fn max_norm(&self) -> f64 {
        (0..self.points.rows()).map(|i| self.norm(i)).fold(0.0, f64::max)
    }

    /// Checks both clauses of the cone-structure definition against the
    /// stored centers, and that every marked point sits in its own cone only.
    pub fn validate(&self) -> Result<()> {
        let (n, k) = self.points.shape();
        let fail = |msg: String| Err(Error::Degenerate(msg));
        if self.centers.orthonormality_defect() > 1e-10 {
            return fail("cone centers are not orthonormal".into());
        }
        let mut unique = 0;
        let mut cone_max = vec![0.0f64; k];
        let mut in_set = vec![false; n];
        for i in 0..n {
            let cones = self.cones_of(i);
            for &j in &cones {
                cone_max[j] = cone_max[j].max(self.norm(i));
            }
            if cones.len() == 1 {
                unique += 1;
            }
            in_set[i] = !cones.is_empty();
            if let Some(c) = self.in_cone[i] {
                if cones != [c] {
                    return fail(format!("point {i} should lie only in cone {c}, found {cones:?}"));
                }
            }
        }
        if (unique as f64) < self.params.eta * n as f64 - 1e-9 {
            return fail(format!("only {unique} of {n} points lie in exactly one cone"));
        }
        if let Some(j) = cone_max.iter().position(|&m| m == 0.0) {
            return fail(format!("cone {j} is empty"));
        }
        let cap = self.params.delta * cone_max.iter().copied().fold(f64::INFINITY, f64::min);
        if let Some(i) = (0..n).find(|&i| !in_set[i] && self.norm(i) > cap * (1.0 + CONE_TOL)) {
            return fail(format!("outside point {i} has norm {} above {cap}", self.norm(i)));
        }
        Ok(())
    }

    /// The pivot-selection hypotheses: `δ c_M < 2^{-k}/√n` and
    /// `μ c_M² < 2^{-2k-4}/n`.
    pub fn satisfies_pivot_caps(&self) -> bool {
        let (n, k) = self.points.shape();
        let (n, k) = (n as f64, k as i32);
        let cm = self.max_norm();
        self.params.delta * cm < 2f64.powi(-k) / n.sqrt() && self.params.mu * cm * cm < 2f64.powi(-2 * k - 4) / n
    }
}

/// Draws an OCS point set, retrying a bounded number of times until the
/// definition checks pass.
///
/// Centers are a random orthogonal basis. `⌈ηn⌉` points go to cones round
/// robin (so every cone is used), at a uniform angle inside a quarter of the
/// allowed aperture and norm uniform in `[0.5, 1]`. The rest point in random
/// directions with norm at most a quarter of the outside cap. The point
/// matrix is then whitened so its columns are orthonormal, the centers are
/// replaced by the nearest orthogonal matrix to their whitened images, and
/// node order is shuffled.
pub fn ocs_sample<R: RngCore + ?Sized>(n: usize, k: usize, params: OcsParams, rng: &mut R) -> Result<OcsSample> {
    let OcsParams { eta, mu, delta } = params;
    if !(eta > 0.0 && eta <= 1.0) || !(0.0..=1.0).contains(&mu) || !(delta > 0.0) {
        return Err(Error::invalid(format!("bad cone parameters {params:?}")));
    }
    if k < 2 || k > n {
        return Err(Error::invalid(format!("need 2 <= k <= n, got k = {k}, n = {n}")));
    }
    let inside = (eta * n as f64).ceil() as usize;
    if inside < k {
        return Err(Error::invalid(format!("{inside} in-cone points cannot fill {k} cones")));
    }
    let mut last = String::new();
    for _ in 0..MAX_ATTEMPTS {
        let sample = draw(n, k, inside, params, rng)?;
        match sample.validate() {
            Ok(()) => return Ok(sample),
            Err(e) => last = e.to_string(),
        }
    }
    Err(Error::Generation { attempts: MAX_ATTEMPTS, reason: last })
}

fn draw<R: RngCore + ?Sized>(n: usize, k: usize, inside: usize, params: OcsParams, rng: &mut R) -> Result<OcsSample> {
    let gaussian = |rng: &mut R| -> f64 { StandardNormal.sample(rng) };
    let g = DenseMatrix::from_fn(k, k, |_, _| gaussian(rng));
    let q = polar(&g)?.orthogonal_factor;

    let cos_cap = 1.0 - params.mu / 4.0;
    let theta_max = cos_cap.clamp(-1.0, 1.0).acos();
    let mut rows = Vec::with_capacity(n);
    let mut cone_of = Vec::with_capacity(n);
    let mut cone_max = vec![0.0f64; k];
    for i in 0..inside {
        let c = i % k;
        let center = q.column(c);
        let mut u: Vec<f64> = (0..k).map(|_| gaussian(rng)).collect();
        let along: f64 = u.iter().zip(&center).map(|(a, b)| a * b).sum();
        for (x, qc) in u.iter_mut().zip(&center) {
            *x -= along * qc;
        }
        let un = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        let theta = theta_max * uniform01(rng);
        let r = 0.5 + 0.5 * uniform01(rng);
        let (s, co) = if un > 0.0 { (theta.sin() / un, theta.cos()) } else { (0.0, 1.0) };
        rows.push((0..k).map(|l| r * (co * center[l] + s * u[l])).collect::<Vec<f64>>());
        cone_of.push(Some(c));
        cone_max[c] = cone_max[c].max(r);
    }
    let outside_cap = params.delta / 4.0 * cone_max.iter().copied().fold(f64::INFINITY, f64::min);
    for _ in inside..n {
        let d: Vec<f64> = (0..k).map(|_| gaussian(rng)).collect();
        let dn = d.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
        let r = outside_cap * uniform01(rng);
        rows.push(d.iter().map(|x| r * x / dn).collect());
        cone_of.push(None);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let x = DenseMatrix::from_rows(&order.iter().map(|&i| rows[i].clone()).collect::<Vec<_>>())?;
    let in_cone = order.iter().map(|&i| cone_of[i]).collect();

    let s = inverse_sqrt(&x.transpose_matmul(&x)?)?;
    let points = x.matmul(&s)?;
    let centers = polar(&s.matmul(&q)?)?.orthogonal_factor;
    Ok(OcsSample { points, centers, in_cone, params })
}

/// `G^{-1/2}` for symmetric positive definite `G`.
fn inverse_sqrt(g: &DenseMatrix) -> Result<DenseMatrix> {
    let eig = sym_eigen_dense(g)?;
    let k = g.rows();
    if eig.values[k - 1] <= 0.0 {
        return Err(Error::Degenerate("point matrix is rank deficient".into()));
    }
    let v = &eig.vectors;
    Ok(DenseMatrix::from_fn(k, k, |i, j| (0..k).map(|l| v[(i, l)] * v[(j, l)] / eig.values[l].sqrt()).sum()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::{assign_deterministic, exact_recovery};
    use crate::graph::ClusterLabels;
    use crate::rng;

    #[test]
    fn exact_rays_are_recovered() {
        let p = OcsParams { eta: 1.0, mu: 0.0, delta: 0.1 };
        let s = ocs_sample(60, 4, p, &mut rng::seeded(2)).unwrap();
        assert!(s.points.orthonormality_defect() < 1e-10);
        s.validate().unwrap();
        let truth = ClusterLabels::new(s.in_cone.iter().map(|c| c.unwrap()).collect(), 4).unwrap();
        let res = assign_deterministic(&s.points).unwrap();
        assert!(exact_recovery(&res.labels, &truth).unwrap());
    }

    #[test]
    fn small_caps_pick_one_pivot_per_cone() {
        let (n, k) = (80, 3);
        let p = OcsParams { eta: 0.9, mu: 1e-7, delta: 1e-3 };
        for seed in 0..5 {
            let s = ocs_sample(n, k, p, &mut rng::seeded(seed)).unwrap();
            assert!(s.satisfies_pivot_caps(), "c_M = {}", s.max_norm());
            let res = assign_deterministic(&s.points).unwrap();
            let mut cones: Vec<usize> = res.pivots.iter().map(|&i| s.in_cone[i].unwrap()).collect();
            cones.sort_unstable();
            assert_eq!(cones, vec![0, 1, 2]);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut r = rng::seeded(0);
        let ok = OcsParams { eta: 0.5, mu: 0.1, delta: 0.1 };
        assert!(ocs_sample(10, 11, ok, &mut r).is_err());
        assert!(ocs_sample(10, 2, OcsParams { eta: 0.0, ..ok }, &mut r).is_err());
        assert!(ocs_sample(10, 2, OcsParams { mu: 1.5, ..ok }, &mut r).is_err());
        assert!(ocs_sample(10, 4, OcsParams { eta: 0.2, ..ok }, &mut r).is_err());
    }
}
