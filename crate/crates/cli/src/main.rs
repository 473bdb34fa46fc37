//! `qrcluster`: spectral clustering by column-pivoted QR from the command line.
//!
//! Exit codes: 0 on success, 1 for usage errors, 2 for runtime or data errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "qrcluster", version, about = "Spectral graph clustering by column-pivoted QR")]
struct Cli {
    /// Seed for all randomness; drawn from system entropy and printed when absent
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cluster a graph from an edge list and write node labels
    Cluster(ClusterArgs),
    /// Sample a stochastic block model graph with its true labels
    Sbm(SbmArgs),
    /// Run a phase-diagram sweep from a config file
    Phase(PhaseArgs),
    /// Multi-way cut metric of a labeling
    Cut(CutArgs),
    /// Connected component census of a graph
    Components(ComponentsArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    CpqrDet,
    CpqrRand,
    CpqrSeededKmeans,
    KmeansPp,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MatrixArg {
    Adjacency,
    Normalized,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MetricArg {
    Recovery,
    CutLeqTruth,
}

#[derive(Args, Debug)]
struct ClusterArgs {
    /// Edge list, one "u v" pair per line, '#' comments allowed
    #[arg(long)]
    graph: PathBuf,
    /// Number of clusters (2 to 64)
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..=64))]
    k: u64,
    /// Assignment method
    #[arg(long, value_enum, default_value_t = MethodArg::CpqrDet)]
    method: MethodArg,
    /// Matrix whose top eigenvectors embed the nodes
    #[arg(long, value_enum, default_value_t = MatrixArg::Normalized)]
    matrix: MatrixArg,
    /// Oversampling factor for cpqr-rand
    #[arg(long, default_value_t = 5.0)]
    gamma: f64,
    /// Failure probability for cpqr-rand
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// Cluster only the largest connected component
    #[arg(long)]
    largest_component: bool,
    /// Labels output file ("node,cluster" CSV)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct SbmArgs {
    /// Cluster sizes, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    /// Within-cluster edge probability
    #[arg(long, requires = "q", conflicts_with_all = ["alpha", "beta", "m"])]
    p: Option<f64>,
    /// Between-cluster edge probability
    #[arg(long, requires = "p")]
    q: Option<f64>,
    /// Within-cluster scale: p = alpha ln(m)/m
    #[arg(long, requires = "beta")]
    alpha: Option<f64>,
    /// Between-cluster scale: q = beta ln(m)/m
    #[arg(long, requires = "alpha")]
    beta: Option<f64>,
    /// Scale node count for alpha and beta [default: smallest cluster size]
    #[arg(long)]
    m: Option<usize>,
    /// Redraw until connected, at most this many extra draws
    #[arg(long)]
    connected: Option<usize>,
    /// Edge list output file
    #[arg(long)]
    edges: PathBuf,
    /// True labels output file ("node,cluster" CSV)
    #[arg(long)]
    truth: PathBuf,
}

#[derive(Args, Debug)]
struct PhaseArgs {
    /// Sweep config ("key = value" lines)
    #[arg(long)]
    config: PathBuf,
    /// CSV output [default: config path with .csv]
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Heatmap output [default: config path with .svg]
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Method shown in the heatmap [default: first configured method]
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    /// Quantity shown in the heatmap
    #[arg(long, value_enum, default_value_t = MetricArg::Recovery)]
    metric: MetricArg,
}

#[derive(Args, Debug)]
struct CutArgs {
    /// Edge list
    #[arg(long)]
    graph: PathBuf,
    /// Labels file ("node,cluster" CSV) covering every node of the graph
    #[arg(long)]
    labels: PathBuf,
}

#[derive(Args, Debug)]
struct ComponentsArgs {
    /// Edge list
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<qrcluster::Error> for CliError {
    fn from(e: qrcluster::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let seed = commands::resolve_seed(&cli);
    eprintln!("qrcluster {}", env!("CARGO_PKG_VERSION"));
    eprintln!("seed: {seed}");
    let result = match &cli.command {
        Command::Cluster(a) => commands::cluster(a, seed),
        Command::Sbm(a) => commands::sbm(a, seed),
        Command::Phase(a) => commands::phase(a, cli.seed),
        Command::Cut(a) => commands::cut(a),
        Command::Components(a) => commands::components(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
