use std::time::Instant;

use super::config::{MatrixKind, Method, PhaseGridConfig};
use crate::cluster::{
    assign_deterministic, assign_randomized, exact_recovery, kmeans_pp, kmeans_seeded, AssignmentResult,
    InitialCenters, DEFAULT_KMEANS_ITER,
};
use crate::error::{Error, Result};
use crate::graph::{
    degree_normalize, multiway_cut_metric, sbm_sample_connected, ClusterLabels, SbmParams, SparseGraph,
};
use crate::linalg::{top_k_eigen_sparse, DenseMatrix, LanczosOptions};
use crate::par::map_indexed;
use crate::rng::{seeded_stream, stream, trial_seed};

/// Aggregated statistics for one `(α, β, method)` cell. These are exactly
/// the CSV columns.
#[derive(Clone, Debug)]
pub struct CellRecord {
    pub alpha: f64,
    pub beta: f64,
    pub method: Method,
    /// Trials with a connected graph and converged eigenvectors.
    pub trials: usize,
    pub recovery: f64,
    /// Mean cut metric over trials where the method produced labels.
    pub mean_cut: f64,
    /// Fraction of trials whose cut metric is at most the truth's.
    pub cut_leq_truth: f64,
    pub runtime_s: f64,
}

impl PartialEq for CellRecord {
    /// Bitwise on the floats, so `NaN` equals itself.
    fn eq(&self, other: &Self) -> bool {
        let same = |a: f64, b: f64| a.to_bits() == b.to_bits();
        same(self.alpha, other.alpha)
            && same(self.beta, other.beta)
            && self.method == other.method
            && self.trials == other.trials
            && same(self.recovery, other.recovery)
            && same(self.mean_cut, other.mean_cut)
            && same(self.cut_leq_truth, other.cut_leq_truth)
            && same(self.runtime_s, other.runtime_s)
    }
}

/// Why a cell produced no trials, or how many of its trials were lost.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CellDiagnostics {
    pub alpha: f64,
    pub beta: f64,
    /// Set when `p` or `q` fall outside `0 <= q < p <= 1`.
    pub skipped: Option<String>,
    pub generation_failures: usize,
    pub eigen_failures: usize,
    /// Per method (in `config.methods` order), trials where it errored.
    pub method_failures: Vec<usize>,
    /// Total SBM draws, including redraws.
    pub draws: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseGridResult {
    /// Sorted by `(β, α, method)`.
    pub records: Vec<CellRecord>,
    /// One per grid cell, `β`-major.
    pub diagnostics: Vec<CellDiagnostics>,
}

impl PhaseGridResult {
    pub fn for_method(&self, method: Method) -> impl Iterator<Item = &CellRecord> {
        self.records.iter().filter(move |r| r.method == method)
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct MethodOutcome {
    failed: bool,
    recovered: bool,
    cut: f64,
    cut_leq_truth: bool,
    runtime_s: f64,
}

enum TrialOutcome {
    Skipped,
    GenerationFailed { draws: usize },
    EigenFailed { draws: usize },
    Done { draws: usize, methods: Vec<MethodOutcome> },
}

/// Runs every `(cell, trial)` pair. Each trial's randomness comes from
/// `trial_seed(master_seed, cell, trial)`, with cells numbered `β`-major,
/// so results do not depend on scheduling.
pub fn run_phase_sweep(config: &PhaseGridConfig) -> Result<PhaseGridResult> {
    config.validate()?;
    let (na, nb) = (config.alpha_range.steps, config.beta_range.steps);
    let cells = na * nb;
    let trials = config.trials_per_cell;
    let cell_params: Vec<std::result::Result<SbmParams, String>> = (0..cells)
        .map(|c| {
            let (alpha, beta) = cell_coordinates(config, c);
            SbmParams::from_alpha_beta(config.cluster_sizes.clone(), alpha, beta, config.size_scale_node)
                .map_err(|e| e.to_string())
        })
        .collect();

    let outcomes = map_indexed(config.execution, cells * trials, |unit| {
        let (cell, trial) = (unit / trials, unit % trials);
        match &cell_params[cell] {
            Ok(params) => run_trial(config, params, trial_seed(config.master_seed, cell as u64, trial as u64)),
            Err(_) => TrialOutcome::Skipped,
        }
    });

    let mut records = Vec::with_capacity(cells * config.methods.len());
    let mut diagnostics = Vec::with_capacity(cells);
    for cell in 0..cells {
        let (alpha, beta) = cell_coordinates(config, cell);
        let mut diag = CellDiagnostics {
            alpha,
            beta,
            skipped: cell_params[cell].as_ref().err().cloned(),
            method_failures: vec![0; config.methods.len()],
            ..Default::default()
        };
        let mut done = 0usize;
        let mut sums = vec![Sums::default(); config.methods.len()];
        for outcome in &outcomes[cell * trials..(cell + 1) * trials] {
            match outcome {
                TrialOutcome::Skipped => {}
                TrialOutcome::GenerationFailed { draws } => {
                    diag.generation_failures += 1;
                    diag.draws += draws;
                }
                TrialOutcome::EigenFailed { draws } => {
                    diag.eigen_failures += 1;
                    diag.draws += draws;
                }
                TrialOutcome::Done { draws, methods } => {
                    done += 1;
                    diag.draws += draws;
                    for (i, m) in methods.iter().enumerate() {
                        sums[i].add(m);
                        diag.method_failures[i] += m.failed as usize;
                    }
                }
            }
        }
        for (i, &method) in config.methods.iter().enumerate() {
            records.push(sums[i].record(alpha, beta, method, done));
        }
        diagnostics.push(diag);
    }
    records.sort_by(|a, b| a.beta.total_cmp(&b.beta).then(a.alpha.total_cmp(&b.alpha)).then(a.method.cmp(&b.method)));
    Ok(PhaseGridResult { records, diagnostics })
}

fn cell_coordinates(config: &PhaseGridConfig, cell: usize) -> (f64, f64) {
    let na = config.alpha_range.steps;
    (config.alpha_range.value(cell % na), config.beta_range.value(cell / na))
}

#[derive(Clone, Default)]
struct Sums {
    recovered: usize,
    cut_sum: f64,
    cut_count: usize,
    leq: usize,
    runtime: f64,
}

impl Sums {
    fn add(&mut self, m: &MethodOutcome) {
        self.runtime += m.runtime_s;
        if m.failed {
            return;
        }
        self.recovered += m.recovered as usize;
        self.cut_sum += m.cut;
        self.cut_count += 1;
        self.leq += m.cut_leq_truth as usize;
    }

    fn record(&self, alpha: f64, beta: f64, method: Method, trials: usize) -> CellRecord {
        let frac = |x: usize| if trials == 0 { f64::NAN } else { x as f64 / trials as f64 };
        CellRecord {
            alpha,
            beta,
            method,
            trials,
            recovery: frac(self.recovered),
            mean_cut: if self.cut_count == 0 { f64::NAN } else { self.cut_sum / self.cut_count as f64 },
            cut_leq_truth: frac(self.leq),
            runtime_s: if trials == 0 { f64::NAN } else { self.runtime / trials as f64 },
        }
    }
}

/// Top-`k` eigenvectors of `A` or `A_N`.
pub fn embedding(graph: &SparseGraph, k: usize, matrix: MatrixKind, seed: u64) -> Result<DenseMatrix> {
    let opts = LanczosOptions { seed, ..Default::default() };
    let pairs = match matrix {
        MatrixKind::Adjacency => top_k_eigen_sparse(graph, k, &opts)?,
        MatrixKind::Normalized => top_k_eigen_sparse(&degree_normalize(graph), k, &opts)?,
    };
    Ok(pairs.vectors)
}

fn run_trial(config: &PhaseGridConfig, params: &SbmParams, seed: u64) -> TrialOutcome {
    let mut graph_rng = seeded_stream(seed, stream::GRAPH);
    let draw = match sbm_sample_connected(params, &mut graph_rng, config.max_redraws) {
        Ok(d) => d,
        Err(_) => return TrialOutcome::GenerationFailed { draws: config.max_redraws + 1 },
    };
    let draws = draw.attempts;
    let k = config.k();
    let Ok(vk) = embedding(&draw.graph, k, config.matrix, seed) else {
        return TrialOutcome::EigenFailed { draws };
    };
    let truth_cut = multiway_cut_metric(&draw.graph, &draw.truth).expect("truth clusters are non-empty");

    let mut randomized: Option<Result<AssignmentResult>> = None;
    let mut randomized_assignment = |vk: &DenseMatrix| -> Result<AssignmentResult> {
        randomized
            .get_or_insert_with(|| {
                let mut rng = seeded_stream(seed, stream::RANDOMIZED_CPQR);
                assign_randomized(vk, config.gamma, config.delta, &mut rng)
            })
            .as_ref()
            .map(Clone::clone)
            .map_err(|e| Error::Degenerate(e.to_string()))
    };

    let mut methods = Vec::with_capacity(config.methods.len());
    for &method in &config.methods {
        let start = config.timing.then(Instant::now);
        let labels = match method {
            Method::CpqrDet => assign_deterministic(&vk).map(|r| r.labels),
            Method::CpqrRand => randomized_assignment(&vk).map(|r| r.labels),
            Method::CpqrSeededKmeans => randomized_assignment(&vk).and_then(|r| {
                kmeans_seeded(&vk, &InitialCenters::Rows(r.pivots), DEFAULT_KMEANS_ITER).map(|km| km.labels)
            }),
            Method::KmeansPp => {
                let mut rng = seeded_stream(seed, stream::KMEANS_PP);
                kmeans_pp(&vk, k, &mut rng, DEFAULT_KMEANS_ITER).map(|km| km.labels)
            }
        };
        let runtime_s = start.map_or(0.0, |s| s.elapsed().as_secs_f64());
        methods.push(score(&draw.graph, &draw.truth, truth_cut, labels, runtime_s));
    }
    TrialOutcome::Done { draws, methods }
}

fn score(
    graph: &SparseGraph,
    truth: &ClusterLabels,
    truth_cut: f64,
    labels: Result<ClusterLabels>,
    runtime_s: f64,
) -> MethodOutcome {
    let failed = MethodOutcome { failed: true, runtime_s, ..Default::default() };
    let Ok(labels) = labels else { return failed };
    let Ok(recovered) = exact_recovery(&labels, truth) else { return failed };
    let Ok(cut) = multiway_cut_metric(graph, &labels.compacted()) else { return failed };
    MethodOutcome { failed: false, recovered, cut, cut_leq_truth: cut <= truth_cut, runtime_s }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::config::{GridRange, Preset};
    use crate::par::Execution;

    fn small(alpha: GridRange, beta: GridRange, trials: usize) -> PhaseGridConfig {
        PhaseGridConfig {
            cluster_sizes: vec![40; 3],
            alpha_range: alpha,
            beta_range: beta,
            trials_per_cell: trials,
            size_scale_node: 40,
            ..PhaseGridConfig::preset(Preset::Desk)
        }
    }

    #[test]
    fn rows_sorted_and_counted() {
        let c = small(GridRange::new(6.0, 9.0, 2), GridRange::new(0.5, 1.0, 2), 2);
        let r = run_phase_sweep(&c).unwrap();
        assert_eq!(r.records.len(), 4 * 4);
        assert_eq!(r.diagnostics.len(), 4);
        for w in r.records.windows(2) {
            let key = |x: &CellRecord| (x.beta, x.alpha, x.method);
            assert!(key(&w[0]).partial_cmp(&key(&w[1])) == Some(std::cmp::Ordering::Less));
        }
        assert!(r.records.iter().all(|x| (0.0..=1.0).contains(&x.recovery) && x.trials <= 2));
    }

    #[test]
    fn invalid_cells_are_skipped() {
        let c = small(GridRange::new(1.0, 1.0, 1), GridRange::new(2.0, 2.0, 1), 2);
        let r = run_phase_sweep(&c).unwrap();
        assert!(r.diagnostics[0].skipped.is_some());
        assert!(r.records.iter().all(|x| x.trials == 0 && x.recovery.is_nan()));
    }

    #[test]
    fn schedule_independent() {
        let mut c = small(GridRange::new(4.0, 10.0, 2), GridRange::new(1.0, 1.0, 1), 3);
        c.execution = Execution::Sequential;
        let a = run_phase_sweep(&c).unwrap();
        c.execution = Execution::Parallel;
        let b = run_phase_sweep(&c).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn recovered_trials_share_truth_cut() {
        let c = small(GridRange::new(9.0, 9.0, 1), GridRange::new(0.5, 0.5, 1), 4);
        let r = run_phase_sweep(&c).unwrap();
        assert!(r.diagnostics[0].skipped.is_none());
        for rec in r.for_method(Method::CpqrDet) {
            assert_eq!(rec.trials, 4);
            assert_eq!(rec.recovery, 1.0);
            assert_eq!(rec.cut_leq_truth, 1.0);
        }
    }
}
