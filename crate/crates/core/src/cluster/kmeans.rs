use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::graph::ClusterLabels;
use crate::linalg::DenseMatrix;

pub const DEFAULT_KMEANS_ITER: usize = 100;

/// Lloyd stops once no center moves farther than this.
pub const KMEANS_SHIFT_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct KmeansResult {
    pub labels: ClusterLabels,
    /// `k × d`, row `c` is the centroid of cluster `c`.
    pub centers: DenseMatrix,
    /// Sum of squared distances from points to their centroids.
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Objective after each assignment step, ending with `objective`.
    pub history: Vec<f64>,
}

/// Starting centers for [`kmeans_seeded`].
#[derive(Clone, Debug)]
pub enum InitialCenters {
    /// Use these point rows.
    Rows(Vec<usize>),
    /// Explicit `k × d` coordinates.
    Explicit(DenseMatrix),
}

/// k-means++ seeding (first center uniform, then `D²` weighting) followed by
/// Lloyd iterations. Unconverged runs are returned as they stand.
pub fn kmeans_pp<R: RngCore + ?Sized>(
    points: &DenseMatrix,
    k: usize,
    rng: &mut R,
    max_iter: usize,
) -> Result<KmeansResult> {
    let n = points.rows();
    if k == 0 || k > n {
        return Err(Error::invalid(format!("k = {k} needs 1 <= k <= n = {n}")));
    }
    let mut chosen = vec![rng.random_range(0..n)];
    let mut d2: Vec<f64> = (0..n).map(|j| sq_dist(points.row(j), points.row(chosen[0]))).collect();
    while chosen.len() < k {
        let next = match WeightedIndex::new(&d2) {
            Ok(w) => w.sample(rng),
            // Every point coincides with a center already.
            Err(_) => (0..n).find(|j| !chosen.contains(j)).expect("k <= n"),
        };
        chosen.push(next);
        for (j, d) in d2.iter_mut().enumerate() {
            *d = d.min(sq_dist(points.row(j), points.row(next)));
        }
    }
    Ok(lloyd(points, points.select_rows(&chosen), max_iter))
}

/// Lloyd iterations from given centers.
pub fn kmeans_seeded(points: &DenseMatrix, init: &InitialCenters, max_iter: usize) -> Result<KmeansResult> {
    let centers = match init {
        InitialCenters::Rows(rows) => {
            if let Some(&bad) = rows.iter().find(|&&r| r >= points.rows()) {
                return Err(Error::invalid(format!("center row {bad} out of range")));
            }
            points.select_rows(rows)
        }
        InitialCenters::Explicit(c) => {
            if c.cols() != points.cols() {
                return Err(Error::invalid(format!("centers have dimension {}, points {}", c.cols(), points.cols())));
            }
            c.clone()
        }
    };
    let k = centers.rows();
    if k > points.rows() {
        return Err(Error::invalid(format!("{k} centers for {} points", points.rows())));
    }
    for a in 0..k {
        for b in (a + 1)..k {
            if centers.row(a) == centers.row(b) {
                return Err(Error::invalid(format!("initial centers {a} and {b} coincide")));
            }
        }
    }
    Ok(lloyd(points, centers, max_iter))
}

/// Sum of squared distances from points to the centroids of `labels`.
/// Empty clusters contribute nothing.
pub fn kmeans_objective(points: &DenseMatrix, labels: &ClusterLabels) -> Result<f64> {
    if labels.len() != points.rows() {
        return Err(Error::invalid(format!("{} labels for {} points", labels.len(), points.rows())));
    }
    let centers = centroids(points, labels.as_slice(), labels.k(), None);
    Ok(objective(points, labels.as_slice(), &centers))
}

fn lloyd(points: &DenseMatrix, mut centers: DenseMatrix, max_iter: usize) -> KmeansResult {
    let k = centers.rows();
    let mut labels = assign(points, &mut centers);
    let mut history = Vec::new();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        let next = centroids(points, &labels, k, Some(&centers));
        let shift = (0..k).map(|c| sq_dist(next.row(c), centers.row(c)).sqrt()).fold(0.0, f64::max);
        centers = next;
        labels = assign(points, &mut centers);
        history.push(objective(points, &labels, &centers));
        if shift < KMEANS_SHIFT_TOL {
            converged = true;
            break;
        }
    }
    let centers = centroids(points, &labels, k, Some(&centers));
    let objective = objective(points, &labels, &centers);
    history.push(objective);
    KmeansResult {
        labels: ClusterLabels::new(labels, k).expect("labels below k"),
        centers,
        objective,
        iterations,
        converged,
        history,
    }
}

/// Nearest-center labels (lowest index on ties). A cluster left empty takes
/// the point farthest from its own center, and its center moves there.
fn assign(points: &DenseMatrix, centers: &mut DenseMatrix) -> Vec<usize> {
    let (n, k) = (points.rows(), centers.rows());
    let mut labels = Vec::with_capacity(n);
    let mut dist = Vec::with_capacity(n);
    for j in 0..n {
        let (mut best, mut best_d) = (0, f64::INFINITY);
        for c in 0..k {
            let d = sq_dist(points.row(j), centers.row(c));
            if d < best_d {
                best = c;
                best_d = d;
            }
        }
        labels.push(best);
        dist.push(best_d);
    }
    let mut sizes = vec![0usize; k];
    for &l in &labels {
        sizes[l] += 1;
    }
    for c in 0..k {
        if sizes[c] > 0 {
            continue;
        }
        let mut far = None;
        for j in 0..n {
            if sizes[labels[j]] > 1 && far.is_none_or(|f: usize| dist[j] > dist[f]) {
                far = Some(j);
            }
        }
        let Some(j) = far else { break };
        sizes[labels[j]] -= 1;
        sizes[c] = 1;
        labels[j] = c;
        dist[j] = 0.0;
        centers.row_mut(c).copy_from_slice(points.row(j));
    }
    labels
}

/// Cluster means; an empty cluster keeps its `previous` center (or zeros).
fn centroids(points: &DenseMatrix, labels: &[usize], k: usize, previous: Option<&DenseMatrix>) -> DenseMatrix {
    let d = points.cols();
    let mut sums = DenseMatrix::zeros(k, d);
    let mut counts = vec![0usize; k];
    for (j, &c) in labels.iter().enumerate() {
        counts[c] += 1;
        for (s, &x) in sums.row_mut(c).iter_mut().zip(points.row(j)) {
            *s += x;
        }
    }
    for c in 0..k {
        if counts[c] == 0 {
            if let Some(prev) = previous {
                sums.row_mut(c).copy_from_slice(prev.row(c));
            }
            continue;
        }
        let inv = 1.0 / counts[c] as f64;
        for s in sums.row_mut(c) {
            *s *= inv;
        }
    }
    sums
}

fn objective(points: &DenseMatrix, labels: &[usize], centers: &DenseMatrix) -> f64 {
    labels.iter().enumerate().map(|(j, &c)| sq_dist(points.row(j), centers.row(c))).sum()
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn pts(rows: &[[f64; 2]]) -> DenseMatrix {
        DenseMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn distinct_points_one_each() {
        let p = pts(&[[0.0, 0.0], [1.0, 0.0], [0.0, 3.0]]);
        let r = kmeans_pp(&p, 3, &mut rng::seeded(1), 100).unwrap();
        assert_eq!(r.objective, 0.0);
        let mut l = r.labels.as_slice().to_vec();
        l.sort_unstable();
        assert_eq!(l, vec![0, 1, 2]);
    }

    #[test]
    fn duplicated_pairs() {
        let p = pts(&[[0.0, 0.0], [0.0, 0.0], [5.0, 5.0], [5.0, 5.0]]);
        for seed in 0..10 {
            let r = kmeans_pp(&p, 2, &mut rng::seeded(seed), 100).unwrap();
            assert_eq!(r.objective, 0.0);
            assert!(r.converged);
        }
    }

    fn brute_force_best(p: &DenseMatrix, k: usize) -> f64 {
        let n = p.rows();
        let mut best = f64::INFINITY;
        let mut labels = vec![0usize; n];
        loop {
            let l = ClusterLabels::new(labels.clone(), k).unwrap();
            best = best.min(kmeans_objective(p, &l).unwrap());
            let mut i = 0;
            while i < n {
                labels[i] += 1;
                if labels[i] < k {
                    break;
                }
                labels[i] = 0;
                i += 1;
            }
            if i == n {
                return best;
            }
        }
    }

    #[test]
    fn close_to_exhaustive_optimum() {
        let p = pts(&[
            [0.0, 0.1],
            [0.3, -0.2],
            [0.1, 0.4],
            [2.0, 2.1],
            [2.3, 1.8],
            [1.9, 2.4],
            [4.0, 0.0],
            [4.2, 0.3],
            [3.8, -0.1],
            [2.1, 0.9],
        ]);
        let global = brute_force_best(&p, 3);
        for seed in 0..5 {
            let r = kmeans_pp(&p, 3, &mut rng::seeded(seed), 100).unwrap();
            assert!(r.objective >= global - 1e-12);
            assert!(r.objective <= 1.5 * global, "seed {seed}: {} vs {global}", r.objective);
        }
    }

    #[test]
    fn true_centroid_seed_converges_fast() {
        let p = pts(&[[0.0, 0.0], [0.2, 0.0], [10.0, 10.0], [10.2, 10.0]]);
        let c = pts(&[[0.1, 0.0], [10.1, 10.0]]);
        let r = kmeans_seeded(&p, &InitialCenters::Explicit(c), 100).unwrap();
        assert!(r.converged && r.iterations <= 2);
        assert_eq!(r.labels.as_slice(), &[0, 0, 1, 1]);
    }

    #[test]
    fn duplicate_seeds_rejected() {
        let p = pts(&[[0.0, 0.0], [0.0, 0.0], [1.0, 1.0]]);
        assert!(kmeans_seeded(&p, &InitialCenters::Rows(vec![0, 1]), 10).is_err());
        assert!(kmeans_seeded(&p, &InitialCenters::Rows(vec![0, 0]), 10).is_err());
        assert!(kmeans_seeded(&p, &InitialCenters::Rows(vec![0, 2]), 10).is_ok());
    }

    #[test]
    fn empty_cluster_relocated_to_farthest_point() {
        let p = pts(&[[0.0, 0.0], [1.0, 0.0], [9.0, 0.0]]);
        // The second center attracts nothing.
        let c = pts(&[[1.0, 0.0], [100.0, 100.0]]);
        let r = kmeans_seeded(&p, &InitialCenters::Explicit(c), 100).unwrap();
        assert_eq!(r.labels.as_slice(), &[0, 0, 1]);
        assert!((r.objective - 0.5).abs() < 1e-12);
    }

    #[test]
    fn objective_matches_recomputation_and_decreases() {
        let mut g = rng::seeded(3);
        let p = DenseMatrix::from_fn(200, 3, |_, _| crate::rng::uniform01(&mut g));
        let r = kmeans_pp(&p, 6, &mut rng::seeded(9), 100).unwrap();
        assert!((r.objective - kmeans_objective(&p, &r.labels).unwrap()).abs() < 1e-10);
        for w in r.history.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
    }
}
