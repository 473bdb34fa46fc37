//! Sequential vs parallel execution for the two hot paths: the phase sweep
//! and the score matrix behind label assignment.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qrcluster::cluster::{assign_deterministic_with, indicator_basis, AssignOptions};
use qrcluster::experiments::{run_phase_sweep, GridRange, Method, PhaseGridConfig, Preset};
use qrcluster::factor::polar;
use qrcluster::graph::ClusterLabels;
use qrcluster::linalg::DenseMatrix;
use qrcluster::par::Execution;
use qrcluster::rng::seeded;
use rand_distr::{Distribution, StandardNormal};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("phase_sweep");
    group.sample_size(10);
    for (name, execution) in MODES {
        let config = PhaseGridConfig {
            cluster_sizes: vec![60; 4],
            alpha_range: GridRange::new(4.0, 12.0, 3),
            beta_range: GridRange::new(0.5, 1.5, 3),
            trials_per_cell: 4,
            methods: vec![Method::CpqrDet, Method::CpqrRand],
            size_scale_node: 60,
            execution,
            ..PhaseGridConfig::preset(Preset::Desk)
        };
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| run_phase_sweep(&config).unwrap()));
    }
    group.finish();
}

fn scores(c: &mut Criterion) {
    let k = 8;
    let truth = ClusterLabels::from_sizes(&[25_000; 8]);
    let mut rng = seeded(7);
    let g = DenseMatrix::from_fn(k, k, |_, _| StandardNormal.sample(&mut rng));
    let z = polar(&g).unwrap().orthogonal_factor;
    let v = indicator_basis(&truth).unwrap().matmul(&z).unwrap();
    let mut group = c.benchmark_group("assign_200k");
    group.sample_size(10);
    for (name, execution) in MODES {
        let opts = AssignOptions { execution, ..AssignOptions::default() };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| assign_deterministic_with(&v, &opts).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, sweep, scores);
criterion_main!(benches);
