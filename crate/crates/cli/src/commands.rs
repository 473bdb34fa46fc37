use std::collections::HashMap;
use std::path::PathBuf;

use qrcluster::cluster::{
    assign_deterministic, assign_randomized, kmeans_objective, kmeans_pp, kmeans_seeded, AssignWarning, InitialCenters,
    DEFAULT_KMEANS_ITER,
};
use qrcluster::experiments::{
    embedding, emit_csv, emit_heatmap_svg, HeatmapMetric, MatrixKind, Method, PhaseGridConfig,
};
use qrcluster::graph::{
    component_sizes, degree_normalize, largest_component, multiway_cut_metric, read_edge_list, read_labels, sbm_sample,
    sbm_sample_connected, write_edge_list, write_labels, ClusterLabels, SbmParams,
};
use qrcluster::rng::{seeded_stream, stream};

use crate::{Cli, CliError, ClusterArgs, ComponentsArgs, CutArgs, MatrixArg, MethodArg, MetricArg, PhaseArgs, SbmArgs};

type Result<T> = std::result::Result<T, CliError>;

pub fn resolve_seed(cli: &Cli) -> u64 {
    cli.seed.unwrap_or_else(rand::random)
}

fn method(m: MethodArg) -> Method {
    match m {
        MethodArg::CpqrDet => Method::CpqrDet,
        MethodArg::CpqrRand => Method::CpqrRand,
        MethodArg::CpqrSeededKmeans => Method::CpqrSeededKmeans,
        MethodArg::KmeansPp => Method::KmeansPp,
    }
}

pub fn cluster(args: &ClusterArgs, seed: u64) -> Result<()> {
    if !(args.gamma > 0.0) || !(args.delta > 0.0 && args.delta < 1.0) {
        return Err(CliError::Usage("need --gamma > 0 and 0 < --delta < 1".into()));
    }
    let edges = read_edge_list(&args.graph)?;
    let (graph, node_ids) = if args.largest_component {
        let (sub, map) = largest_component(&edges.graph);
        let ids: Vec<u64> = map.iter().map(|&v| edges.node_ids[v]).collect();
        (sub, ids)
    } else {
        (edges.graph, edges.node_ids)
    };
    let k = args.k as usize;
    if k > graph.n() {
        return Err(CliError::Usage(format!("--k {k} exceeds the {} nodes of the graph", graph.n())));
    }
    let matrix = match args.matrix {
        MatrixArg::Adjacency => MatrixKind::Adjacency,
        MatrixArg::Normalized => {
            let isolated = degree_normalize(&graph).isolated.len();
            if isolated > 0 {
                eprintln!("warning: {isolated} isolated nodes get zero rows in the normalized matrix");
            }
            MatrixKind::Normalized
        }
    };
    let vk = embedding(&graph, k, matrix, seed)?;
    let report = |warnings: &[AssignWarning]| {
        for w in warnings {
            let AssignWarning::RankDeficientPivots { sigma_min } = w;
            eprintln!("warning: pivot block is nearly singular (sigma_min = {sigma_min:e})");
        }
    };
    let labels = match method(args.method) {
        Method::CpqrDet => {
            let r = assign_deterministic(&vk)?;
            report(&r.warnings);
            r.labels
        }
        Method::CpqrRand => {
            let mut rng = seeded_stream(seed, stream::RANDOMIZED_CPQR);
            let r = assign_randomized(&vk, args.gamma, args.delta, &mut rng)?;
            report(&r.warnings);
            r.labels
        }
        Method::CpqrSeededKmeans => {
            let r = assign_deterministic(&vk)?;
            report(&r.warnings);
            kmeans_seeded(&vk, &InitialCenters::Rows(r.pivots), DEFAULT_KMEANS_ITER)?.labels
        }
        Method::KmeansPp => {
            let mut rng = seeded_stream(seed, stream::KMEANS_PP);
            let r = kmeans_pp(&vk, k, &mut rng, DEFAULT_KMEANS_ITER)?;
            if !r.converged {
                eprintln!("warning: k-means did not converge in {DEFAULT_KMEANS_ITER} iterations");
            }
            r.labels
        }
    };
    let objective = kmeans_objective(&vk, &labels)?;
    let compact = labels.compacted();
    if compact.k() < k {
        eprintln!("warning: {} of {k} clusters are empty", k - compact.k());
    }
    let cut = multiway_cut_metric(&graph, &compact)?;
    write_labels(&args.out, &labels, Some(&node_ids))?;
    println!("nodes: {}", graph.n());
    println!("edges: {}", graph.edge_count());
    println!("clusters: {k}");
    println!("kmeans_objective: {objective:.6}");
    println!("cut_metric: {cut:.6}");
    Ok(())
}

pub fn sbm(args: &SbmArgs, seed: u64) -> Result<()> {
    let params = match (args.p, args.q, args.alpha, args.beta) {
        (Some(p), Some(q), None, None) => SbmParams::new(args.sizes.clone(), p, q),
        (None, None, Some(alpha), Some(beta)) => {
            let m = args.m.unwrap_or_else(|| args.sizes.iter().copied().min().unwrap_or(0));
            SbmParams::from_alpha_beta(args.sizes.clone(), alpha, beta, m)
        }
        _ => return Err(CliError::Usage("give either --p and --q or --alpha and --beta".into())),
    }
    .map_err(|e| CliError::Usage(e.to_string()))?;
    println!("p = {}", params.p);
    println!("q = {}", params.q);
    let mut rng = seeded_stream(seed, stream::GRAPH);
    let (graph, truth) = match args.connected {
        Some(max_redraws) => {
            let d = sbm_sample_connected(&params, &mut rng, max_redraws)?;
            println!("draws: {}", d.attempts);
            (d.graph, d.truth)
        }
        None => sbm_sample(&params, &mut rng),
    };
    write_edge_list(&args.edges, &graph, None)?;
    write_labels(&args.truth, &truth, None)?;
    println!("nodes: {}", graph.n());
    println!("edges: {}", graph.edge_count());
    Ok(())
}

pub fn phase(args: &PhaseArgs, seed: Option<u64>) -> Result<()> {
    let mut config = PhaseGridConfig::load(&args.config).map_err(|e| match e {
        qrcluster::Error::Io(_) => CliError::Runtime(e.to_string()),
        other => CliError::Usage(format!("{}: {other}", args.config.display())),
    })?;
    if let Some(s) = seed {
        config.master_seed = s;
    }
    let shown = match args.method {
        Some(m) => method(m),
        None => config.methods[0],
    };
    if !config.methods.contains(&shown) {
        return Err(CliError::Usage(format!("--method {shown} is not in the config's methods")));
    }
    eprintln!("master_seed: {}", config.master_seed);
    let csv = args.csv.clone().unwrap_or_else(|| with_extension(&args.config, "csv"));
    let svg = args.svg.clone().unwrap_or_else(|| with_extension(&args.config, "svg"));
    let result = qrcluster::experiments::run_phase_sweep(&config)?;
    let metric = match args.metric {
        MetricArg::Recovery => HeatmapMetric::Recovery,
        MetricArg::CutLeqTruth => HeatmapMetric::CutLeqTruth,
    };
    emit_csv(&result, &csv)?;
    emit_heatmap_svg(&result, shown, metric, &svg)?;
    let skipped = result.diagnostics.iter().filter(|d| d.skipped.is_some()).count();
    let failed: usize = result.diagnostics.iter().map(|d| d.generation_failures + d.eigen_failures).sum();
    println!("cells: {}", result.diagnostics.len());
    println!("skipped_cells: {skipped}");
    println!("lost_trials: {failed}");
    println!("csv: {}", csv.display());
    println!("svg: {}", svg.display());
    Ok(())
}

fn with_extension(path: &std::path::Path, ext: &str) -> PathBuf {
    let mut p = path.to_path_buf();
    p.set_extension(ext);
    p
}

pub fn cut(args: &CutArgs) -> Result<()> {
    let edges = read_edge_list(&args.graph)?;
    let (ids, labels) = read_labels(&args.labels)?;
    let index: HashMap<u64, usize> = edges.node_ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let mut per_node = vec![None; edges.graph.n()];
    for (&id, &label) in ids.iter().zip(labels.as_slice()) {
        let Some(&v) = index.get(&id) else {
            return Err(CliError::Runtime(format!("label file names node {id}, which is not in the graph")));
        };
        if per_node[v].replace(label).is_some() {
            return Err(CliError::Runtime(format!("node {id} is labeled twice")));
        }
    }
    let labels: Vec<usize> = per_node
        .iter()
        .enumerate()
        .map(|(v, l)| l.ok_or_else(|| CliError::Runtime(format!("node {} has no label", edges.node_ids[v]))))
        .collect::<Result<_>>()?;
    let metric = multiway_cut_metric(&edges.graph, &ClusterLabels::from_labels(labels))?;
    println!("{metric:.6}");
    Ok(())
}

pub fn components(args: &ComponentsArgs) -> Result<()> {
    let edges = read_edge_list(&args.graph)?;
    let sizes = component_sizes(&edges.graph);
    println!("nodes: {}", edges.graph.n());
    println!("edges: {}", edges.graph.edge_count());
    println!("duplicates_dropped: {}", edges.duplicates);
    println!("self_loops_dropped: {}", edges.self_loops);
    println!("components: {}", sizes.len());
    println!("largest: {}", sizes.first().copied().unwrap_or(0));
    let list: Vec<String> = sizes.iter().map(usize::to_string).collect();
    println!("sizes: {}", list.join(","));
    Ok(())
}
