//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on runtime errors (missing file, parse
//! failure, invalid configuration), 2 on usage errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command as Process;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bench::{run_comparison, Algorithm, BenchConfig, DataSource, FcmSettings, ReferenceShape, DEFAULT_SEED};
use crate::complexity::{complexity_table, render_table};
use crate::error::{ClusterError, Result};
use crate::fcm::{run_fcm, FcmConfig, FcmResult, StopCriterion};
use crate::ingest::{load_csv, select_features, sha256_hex, CsvOptions, LabeledDataset, IRIS_DATA, IRIS_FEATURES, IRIS_SHA256};
use crate::kmeans::{run_kmeans_replicated, KMeansConfig, ReplicatedKMeans};
use crate::plot::{emit_plot_data, write_report};
use crate::rng::RandomStream;

/// Overrides the directory holding `iris.data`.
pub const DATA_DIR_ENV: &str = "CLUSTERBENCH_DATA_DIR";
pub const IRIS_FILE: &str = "iris.data";
pub const IRIS_URL: &str = "https://archive.ics.uci.edu/ml/machine-learning-databases/iris/iris.data";

pub fn data_dir() -> PathBuf {
    std::env::var_os(DATA_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("data"))
}

#[derive(Debug, Parser)]
#[command(name = "clusterbench", version, about = "Hard K-means vs fuzzy C-means, reproducibly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Replicated K-means with per-replicate sum-of-distances display
    Kmeans(KmeansArgs),
    /// Fuzzy C-means with per-iteration objective display
    Fcm(FcmArgs),
    /// Timed comparison of both algorithms with a JSON report
    Compare(CompareArgs),
    /// Operation-count table for both algorithms
    Complexity(ComplexityArgs),
    /// Write the checksum-verified Iris file into the data directory
    FetchData(FetchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Table,
    Json,
}

#[derive(Debug, Args)]
struct DataArgs {
    /// Input file: numeric columns, optional class column
    /// [default: $CLUSTERBENCH_DATA_DIR/iris.data, else data/iris.data]
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Field delimiter
    #[arg(long, default_value_t = ',')]
    delimiter: char,
    /// Keep only these columns, in this order (e.g. 0,1) [default: all]
    #[arg(long, value_delimiter = ',', value_name = "COLS")]
    features: Option<Vec<usize>>,
    /// Seed for all random draws
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output format
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,
}

#[derive(Debug, Args)]
struct KmeansArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Cluster counts: a value, a list (2,4) or a range (1..4)
    #[arg(long, default_value = "4", value_parser = parse_cluster_list)]
    clusters: ClusterList,
    /// Independent restarts; the lowest total sum of distances wins
    #[arg(long, default_value_t = 1)]
    replicates: usize,
    /// Iteration cap per replicate
    #[arg(long = "max-iter", default_value_t = 100)]
    max_iter: usize,
    /// Write output here instead of standard output
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FcmFlags {
    /// Fuzzifier exponent m > 1
    #[arg(long, default_value_t = 2.0)]
    m: f64,
    /// Termination threshold in (0, 1)
    #[arg(long, default_value_t = 1e-6)]
    eps: f64,
    /// Iteration cap
    #[arg(long = "max-iter", default_value_t = 100)]
    max_iter: usize,
    /// Stop test: membership-delta or objective-improvement
    #[arg(long, default_value_t = StopCriterion::MembershipDelta)]
    criterion: StopCriterion,
}

#[derive(Debug, Args)]
struct FcmArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Cluster counts: a value, a list (2,4) or a range (2..4)
    #[arg(long, default_value = "4", value_parser = parse_cluster_list)]
    clusters: ClusterList,
    #[command(flatten)]
    fcm: FcmFlags,
    /// Write output here instead of standard output
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Cluster counts: a value, a list (1,2,3,4) or a range (1..4)
    #[arg(long, default_value = "4", value_parser = parse_cluster_list)]
    clusters: ClusterList,
    /// K-means restarts per cluster count
    #[arg(long, default_value_t = 5)]
    replicates: usize,
    #[command(flatten)]
    fcm: FcmFlags,
    /// Timed repeats per entry; the median is reported
    #[arg(long, default_value_t = 3)]
    timing_repeats: usize,
    /// Write plot-ready CSV files into this directory
    #[arg(long, value_name = "DIR")]
    emit_plot_data: Option<PathBuf>,
    /// Write the JSON report here
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ComplexityArgs {
    /// Number of points
    #[arg(long, default_value_t = 200)]
    n: u64,
    /// Dimension
    #[arg(long, default_value_t = 4)]
    d: u64,
    /// Iteration count
    #[arg(long, default_value_t = 28)]
    i: u64,
    /// Cluster counts: a value, a list (1,2,3,4) or a range (1..4)
    #[arg(long, default_value = "1..4", value_parser = parse_cluster_list)]
    clusters: ClusterList,
    /// Output format
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,
    /// Write output here instead of standard output
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FetchArgs {
    /// Target directory [default: $CLUSTERBENCH_DATA_DIR, else data]
    #[arg(long, value_name = "DIR")]
    dest: Option<PathBuf>,
    /// Download from this URL with curl instead of using the bundled copy
    #[arg(long, num_args = 0..=1, default_missing_value = IRIS_URL)]
    url: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct ClusterList(Vec<usize>);

/// Accepts `4`, `1,2,3,4`, `1..4` (inclusive) and mixtures like `1..3,6`.
pub fn parse_cluster_values(s: &str) -> std::result::Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: usize = lo.trim().parse().map_err(|_| format!("bad range start in `{part}`"))?;
            let hi: usize = hi.trim().parse().map_err(|_| format!("bad range end in `{part}`"))?;
            if lo > hi {
                return Err(format!("empty range `{part}`"));
            }
            out.extend(lo..=hi);
        } else {
            out.push(part.parse().map_err(|_| format!("`{part}` is not a cluster count"))?);
        }
    }
    Ok(out)
}

fn parse_cluster_list(s: &str) -> std::result::Result<ClusterList, String> {
    parse_cluster_values(s).map(ClusterList)
}

/// Parses `argv` (program name first), runs the command, and returns the
/// process exit code.
pub fn parse_and_dispatch<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    2
                }
            };
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<()> {
    match command {
        Command::Kmeans(args) => cmd_kmeans(args, stdout),
        Command::Fcm(args) => cmd_fcm(args, stdout),
        Command::Compare(args) => cmd_compare(args, stdout),
        Command::Complexity(args) => cmd_complexity(args, stdout),
        Command::FetchData(args) => cmd_fetch(args, stdout),
    }
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| ClusterError::io(path, e)),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| ClusterError::io("<stdout>", e)),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn load_dataset(args: &DataArgs) -> Result<(LabeledDataset, DataSource)> {
    let path = args
        .input
        .clone()
        .unwrap_or_else(|| data_dir().join(IRIS_FILE));
    let bytes = fs::read(&path).map_err(|e| ClusterError::io(&path, e))?;
    let options = CsvOptions {
        delimiter: args.delimiter,
        ..CsvOptions::default()
    };
    let mut ds = load_csv(bytes.as_slice(), &options)?;
    let checksum = sha256_hex(&bytes);
    if ds.feature_names.is_none() && checksum == IRIS_SHA256 {
        ds.feature_names = Some(IRIS_FEATURES.iter().map(|s| s.to_string()).collect());
    }
    if let Some(features) = &args.features {
        ds = select_features(&ds, features)?;
    }
    let source = DataSource {
        name: path.display().to_string(),
        sha256: checksum,
    };
    Ok((ds, source))
}

#[derive(Serialize)]
struct KmeansOutput<'a> {
    clusters: usize,
    seed: u64,
    result: &'a ReplicatedKMeans,
}

fn cmd_kmeans(args: KmeansArgs, stdout: &mut dyn Write) -> Result<()> {
    let (ds, _) = load_dataset(&args.data)?;
    let base = RandomStream::new(args.data.seed);
    let mut results = Vec::new();
    for &k in &args.clusters.0 {
        let config = KMeansConfig::new(k)
            .with_replicates(args.replicates)
            .with_max_iterations(args.max_iter);
        results.push((k, run_kmeans_replicated(&ds.data, &config, &base.derive(k as u64))?));
    }
    let text = match args.data.format {
        OutputFormat::Json => to_json(
            &results
                .iter()
                .map(|(k, r)| KmeansOutput {
                    clusters: *k,
                    seed: args.data.seed,
                    result: r,
                })
                .collect::<Vec<_>>(),
        ),
        OutputFormat::Table => {
            let mut s = String::new();
            for (k, r) in &results {
                let _ = writeln!(s, "k = {k}");
                for line in r.transcript() {
                    let _ = writeln!(s, "{line}");
                }
                let _ = writeln!(s, "Cluster sizes: {:?}", r.best.assignment.cluster_sizes());
                let _ = writeln!(s, "Within-cluster sums: {:?}", r.best.per_cluster_sumd);
            }
            s
        }
    };
    emit(&text, args.out.as_deref(), stdout)
}

#[derive(Serialize)]
struct FcmOutput<'a> {
    clusters: usize,
    seed: u64,
    config: FcmConfig,
    result: &'a FcmResult,
}

fn fcm_config(flags: &FcmFlags, c: usize) -> FcmConfig {
    FcmConfig::new(c)
        .with_fuzzifier(flags.m)
        .with_epsilon(flags.eps)
        .with_max_iterations(flags.max_iter)
        .with_criterion(flags.criterion)
}

fn cmd_fcm(args: FcmArgs, stdout: &mut dyn Write) -> Result<()> {
    let (ds, _) = load_dataset(&args.data)?;
    let base = RandomStream::new(args.data.seed);
    let mut results = Vec::new();
    for &c in &args.clusters.0 {
        let config = fcm_config(&args.fcm, c);
        let result = run_fcm(&ds.data, &config, &mut base.derive(c as u64))?;
        results.push((config, result));
    }
    let text = match args.data.format {
        OutputFormat::Json => to_json(
            &results
                .iter()
                .map(|(config, r)| FcmOutput {
                    clusters: config.c,
                    seed: args.data.seed,
                    config: *config,
                    result: r,
                })
                .collect::<Vec<_>>(),
        ),
        OutputFormat::Table => {
            let mut s = String::new();
            for (config, r) in &results {
                let _ = writeln!(s, "c = {}", config.c);
                for (k, j) in r.objective_history.iter().enumerate() {
                    let _ = writeln!(s, "Iteration count = {}, obj. fcn = {j:.6}", k + 1);
                }
                let _ = writeln!(
                    s,
                    "{} after {} iterations ({}, eps = {:e}); final objective = {:.6}",
                    if r.converged { "Converged" } else { "Stopped" },
                    r.iterations,
                    config.criterion,
                    config.epsilon,
                    r.objective
                );
                for (j, center) in r.centers.iter().enumerate() {
                    let _ = writeln!(s, "center {j}: {center:?}");
                }
            }
            s
        }
    };
    emit(&text, args.out.as_deref(), stdout)
}

fn cmd_compare(args: CompareArgs, stdout: &mut dyn Write) -> Result<()> {
    let (ds, source) = load_dataset(&args.data)?;
    let config = BenchConfig {
        cluster_counts: args.clusters.0.clone(),
        replicates: args.replicates,
        seed: args.data.seed,
        fcm: FcmSettings {
            m: args.fcm.m,
            epsilon: args.fcm.eps,
            max_iterations: args.fcm.max_iter,
            criterion: args.fcm.criterion,
        },
        timing_repeats: args.timing_repeats,
        reference: ReferenceShape::default(),
        ..BenchConfig::default()
    };
    let comparison = run_comparison(&ds, &source, &config)?;
    let report = &comparison.report;
    if let Some(path) = &args.out {
        write_report(report, path)?;
    }
    if let Some(dir) = &args.emit_plot_data {
        emit_plot_data(report, &comparison.runs, &ds.data, dir)?;
    }
    let text = match args.data.format {
        OutputFormat::Json => {
            let mut s = report.to_json();
            s.push('\n');
            s
        }
        OutputFormat::Table => {
            let mut s = format!(
                "dataset {} (n = {}, d = {}, sha256 {})\n",
                report.dataset.source, report.dataset.n, report.dataset.d, report.dataset.checksum
            );
            s.push_str("algorithm\tclusters\tmedian_seconds\titerations\tobjective\tconverged\n");
            for e in &report.entries {
                match &e.skipped {
                    Some(reason) => {
                        let _ = writeln!(s, "{}\t{}\tskipped: {reason}", e.algorithm.as_str(), e.clusters);
                    }
                    None => {
                        let _ = writeln!(
                            s,
                            "{}\t{}\t{:.6}\t{}\t{:.6}\t{}",
                            e.algorithm.as_str(),
                            e.clusters,
                            e.elapsed_seconds.unwrap_or_default(),
                            e.iterations.unwrap_or_default(),
                            e.objective.unwrap_or_default(),
                            e.converged.unwrap_or_default()
                        );
                    }
                }
            }
            for &c in &config.cluster_counts {
                if let (Some(k), Some(f)) = (
                    report.entry(Algorithm::Kmeans, c).and_then(|e| e.elapsed_seconds),
                    report.entry(Algorithm::Fcm, c).and_then(|e| e.elapsed_seconds),
                ) {
                    let _ = writeln!(s, "c = {c}: FCM / K-means elapsed ratio = {:.2}", f / k);
                }
            }
            s.push('\n');
            s.push_str(&render_table(&report.complexity_reference.rows));
            s
        }
    };
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| ClusterError::io("<stdout>", e))
}

fn cmd_complexity(args: ComplexityArgs, stdout: &mut dyn Write) -> Result<()> {
    let counts: Vec<u64> = args.clusters.0.iter().map(|&c| c as u64).collect();
    let rows = complexity_table(args.n, args.d, args.i, &counts)?;
    let text = match args.format {
        OutputFormat::Json => to_json(&rows),
        OutputFormat::Table => render_table(&rows),
    };
    emit(&text, args.out.as_deref(), stdout)
}

fn download(url: &str) -> Result<Vec<u8>> {
    let output = Process::new("curl")
        .args(["-fsSL", "--max-time", "60", url])
        .output()
        .map_err(|e| ClusterError::External {
            context: "running curl".into(),
            message: e.to_string(),
        })?;
    if !output.status.success() {
        return Err(ClusterError::External {
            context: format!("downloading {url}"),
            message: String::from_utf8_lossy(&output.stderr).trim().to_string(),
        });
    }
    Ok(output.stdout)
}

fn cmd_fetch(args: FetchArgs, stdout: &mut dyn Write) -> Result<()> {
    let bytes = match &args.url {
        Some(url) => download(url)?,
        None => IRIS_DATA.to_vec(),
    };
    let got = sha256_hex(&bytes);
    if got != IRIS_SHA256 {
        return Err(ClusterError::ChecksumMismatch {
            expected: IRIS_SHA256.into(),
            got,
        });
    }
    let dir = args.dest.unwrap_or_else(data_dir);
    fs::create_dir_all(&dir).map_err(|e| ClusterError::io(&dir, e))?;
    let path = dir.join(IRIS_FILE);
    fs::write(&path, &bytes).map_err(|e| ClusterError::io(&path, e))?;
    writeln!(stdout, "wrote {} (sha256 {got})", path.display()).map_err(|e| ClusterError::io("<stdout>", e))
}
