//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 on usage errors, 1 on runtime errors. All
//! diagnostics go to standard error.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dataset::{Dataset, Metric};
use crate::error::{Error, Result};
use crate::eval::{clustering_accuracy, pairwise_f1, GroundTruth};
use crate::graph::{write_graph, NnDescentParams};
use crate::io::{
    load_distance_matrix_csv, load_ground_truth, load_points_csv, read_result_csv,
    write_levels_csv, write_result_csv,
};
use crate::pipeline::{build_graph, cluster, ClusterConfig, GraphMode};
use crate::plot::emit_svg_scatter;
use crate::propagation::Labeling;

/// Environment variable capping worker threads (0 or unset = all cores).
pub const THREADS_ENV: &str = "ERODE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "erode", version, about = "Clustering by boundary erosion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cluster a dataset and write `id,label,level,rho` rows.
    Cluster(RunConfig),
    /// Build the neighbor graph only and write it in text form.
    Graph(GraphArgs),
    /// Score a result file against ground truth.
    Eval(EvalArgs),
    /// Draw a result file over its 2-D points as SVG.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InputKind {
    /// Rows of coordinates, optional trailing `label` column.
    Points,
    /// Square matrix of pairwise distances.
    Matrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Nndescent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricArg {
    Euclidean,
    Cosine,
    Precomputed,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Euclidean => Metric::Euclidean,
            MetricArg::Cosine => Metric::Cosine,
            MetricArg::Precomputed => Metric::Precomputed,
        }
    }
}

#[derive(Debug, Args)]
struct GraphArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = InputKind::Points)]
    input_kind: InputKind,
    /// Neighborhood radius.
    #[arg(short = 'r', long = "radius")]
    radius: f64,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    /// NN-Descent neighbors per sample.
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 1.0)]
    sample_rate: f64,
    #[arg(long, default_value_t = 0.001)]
    delta: f64,
    #[arg(long, default_value_t = 30)]
    max_iters: usize,
    /// Seed for NN-Descent; exact mode ignores it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Defaults to euclidean for points and precomputed for matrices.
    #[arg(long, value_enum)]
    metric: Option<MetricArg>,
    /// Rescale every coordinate column to [0, 1] before clustering.
    #[arg(long)]
    normalize: bool,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct RunConfig {
    #[command(flatten)]
    graph: GraphArgs,
    /// Propagate over lists augmented to this many nearest neighbors.
    #[arg(long)]
    augment_k: Option<usize>,
    #[arg(long, default_value_t = 1)]
    min_cluster_size: usize,
    /// Ground truth to score the result against.
    #[arg(long)]
    gt: Option<PathBuf>,
    /// Also write an SVG scatter plot (2-D points only).
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Also write `id,level,initial_rho` rows.
    #[arg(long)]
    levels: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Result file from `erode cluster`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    gt: PathBuf,
}

#[derive(Debug, Args)]
struct PlotArgs {
    /// 2-D point table.
    #[arg(long)]
    input: PathBuf,
    /// Result file from `erode cluster`.
    #[arg(long)]
    labels: PathBuf,
    #[arg(long, alias = "plot")]
    output: PathBuf,
}

enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e)
    }
}

/// Runs the CLI on `argv` (including the program name) and returns the
/// process exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };

    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: cannot start worker threads: {e}");
            return 1;
        }
    };

    match pool.install(|| execute(cli.command)) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Cluster(cfg) => run_cluster(cfg),
        Command::Graph(args) => run_graph(args),
        Command::Eval(args) => run_eval(args),
        Command::Plot(args) => run_plot(args),
    }
}

fn load_input(args: &GraphArgs) -> Result<(Dataset, Metric, Option<GroundTruth>), Failure> {
    if args.mode == Mode::Nndescent && args.input_kind == InputKind::Matrix {
        return Err(Failure::Usage(
            "--mode nndescent requires points input".into(),
        ));
    }
    if args.radius.is_nan() || args.radius < 0.0 {
        return Err(Failure::Usage(format!(
            "--radius must be non-negative, got {}",
            args.radius
        )));
    }
    let (data, truth) = match args.input_kind {
        InputKind::Points => {
            let (data, truth) = load_points_csv(&args.input)?;
            let data = match (args.normalize, data) {
                (true, Dataset::Points(p)) => Dataset::Points(p.min_max_normalized()),
                (_, d) => d,
            };
            (data, truth)
        }
        InputKind::Matrix => {
            if args.normalize {
                return Err(Failure::Usage(
                    "--normalize applies to points input only".into(),
                ));
            }
            (load_distance_matrix_csv(&args.input)?, None)
        }
    };
    let metric = args
        .metric
        .map(Metric::from)
        .unwrap_or_else(|| Metric::default_for(&data));
    Ok((data, metric, truth))
}

fn graph_mode(args: &GraphArgs) -> GraphMode {
    match args.mode {
        Mode::Exact => GraphMode::Exact,
        Mode::Nndescent => GraphMode::NnDescent(NnDescentParams {
            k: args.k,
            sample_rate: args.sample_rate,
            termination_delta: args.delta,
            max_iters: args.max_iters,
            seed: args.seed,
        }),
    }
}

fn print_scores(labeling: &Labeling, truth: &GroundTruth) -> Result<()> {
    let accuracy = clustering_accuracy(labeling, truth)?;
    let f1 = pairwise_f1(labeling, truth)?;
    println!("accuracy={accuracy:.4}");
    println!("f1={f1:.4}");
    println!("error={:.4}", 1.0 - accuracy);
    println!("clusters={}", labeling.cluster_count());
    Ok(())
}

fn run_cluster(cfg: RunConfig) -> Result<(), Failure> {
    let (data, metric, embedded_truth) = load_input(&cfg.graph)?;
    if let Some(k) = cfg.augment_k {
        if k == 0 || k >= data.len() {
            return Err(Failure::Usage(format!(
                "--augment-k must satisfy 1 <= k < n (k = {k}, n = {})",
                data.len()
            )));
        }
        if cfg.graph.mode == Mode::Nndescent && k > cfg.graph.k {
            return Err(Failure::Usage(format!(
                "--augment-k ({k}) may not exceed --k ({})",
                cfg.graph.k
            )));
        }
    }
    let config = ClusterConfig {
        radius: cfg.graph.radius,
        mode: graph_mode(&cfg.graph),
        augment_k: cfg.augment_k,
        min_cluster_size: cfg.min_cluster_size,
    };
    let result = cluster(&data, metric, &config)?;
    write_result_csv(
        &result.labeling,
        &result.levels,
        result.density(),
        &cfg.graph.output,
    )?;
    if let Some(path) = &cfg.levels {
        write_levels_csv(&result.levels, path)?;
    }
    if let Some(path) = &cfg.plot {
        emit_svg_scatter(&data, &result.labeling, path)?;
    }
    eprintln!(
        "n={} clusters={} outliers={} levels={} edges={}",
        data.len(),
        result.labeling.cluster_count(),
        result.labeling.outlier_count(),
        result.levels.max_level(),
        result.graph.edge_count()
    );
    let truth = match &cfg.gt {
        Some(path) => Some(load_ground_truth(path)?),
        None => embedded_truth,
    };
    if let Some(truth) = truth {
        print_scores(&result.labeling, &truth)?;
    }
    Ok(())
}

fn run_graph(args: GraphArgs) -> Result<(), Failure> {
    let (data, metric, _) = load_input(&args)?;
    let config = ClusterConfig {
        mode: graph_mode(&args),
        ..ClusterConfig::new(args.radius)
    };
    let (graph, _) = build_graph(&data, metric, &config)?;
    write_graph(&graph, &args.output)?;
    eprintln!("n={} edges={}", graph.len(), graph.edge_count());
    Ok(())
}

fn run_eval(args: EvalArgs) -> Result<(), Failure> {
    let result = read_result_csv(&args.input)?;
    let truth = load_ground_truth(&args.gt)?;
    print_scores(&result.labeling, &truth)?;
    Ok(())
}

fn run_plot(args: PlotArgs) -> Result<(), Failure> {
    let (data, _) = load_points_csv(&args.input)?;
    let result = read_result_csv(&args.labels)?;
    emit_svg_scatter(&data, &result.labeling, &args.output)?;
    Ok(())
}
