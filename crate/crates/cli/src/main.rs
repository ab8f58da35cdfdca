//! `rope`: batch contrast enhancement, method comparison and metric reports.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rope_core::equalizer::Method;

mod compare;
mod enhance;
mod inputs;
mod metrics;
mod params;

use params::{parse_method, ParamArgs, ReportFormat};

/// Falls back to this when neither `--output` nor ROPE_OUTPUT_DIR is set.
const DEFAULT_OUTPUT_DIR: &str = "rope-out";

#[derive(Parser, Debug)]
#[command(name = "rope", version, about = "Reflectance-oriented histogram equalization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enhance images or directories of images.
    Enhance(EnhanceArgs),
    /// Report DE, EME, PD and LOE for a set of images.
    Metrics(MetricsArgs),
    /// Run every method on one image and write the results side by side.
    Compare(CompareArgs),
}

#[derive(clap::Args, Debug)]
pub struct EnhanceArgs {
    /// Input files or directories (PNG/JPEG).
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Output file (single input with a .png name) or directory.
    #[arg(short, long, env = "ROPE_OUTPUT_DIR")]
    output: Option<PathBuf>,
    #[arg(short, long, default_value = "rope", value_parser = parse_method)]
    method: Method,
    #[command(flatten)]
    params: ParamArgs,
    /// Write `<name>.json` with the mapping table and 1D histogram.
    #[arg(long)]
    sidecar: bool,
    /// Write gray channels, the 2D histogram and retinex maps to `<name>.debug/`.
    #[arg(long)]
    dump: bool,
    /// Images processed concurrently (0 = one per core).
    #[arg(short, long, default_value_t = 1)]
    jobs: usize,
}

#[derive(clap::Args, Debug)]
pub struct MetricsArgs {
    /// Images to measure, or directories of them.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Directory of originals, paired with inputs by file stem, for LOE.
    #[arg(short, long)]
    reference: Option<PathBuf>,
    /// Metrics to compute (LOE needs --reference).
    #[arg(long, value_delimiter = ',', default_values = ["de", "eme", "pd", "loe"])]
    metrics: Vec<metrics::Metric>,
    #[arg(short, long, value_enum, default_value = "json")]
    format: ReportFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    /// EME tile side in pixels.
    #[arg(long, default_value_t = rope_core::metrics::DEFAULT_EME_BLOCK)]
    eme_block: usize,
    /// LOE lattice side.
    #[arg(long, default_value_t = rope_core::metrics::DEFAULT_LOE_GRID)]
    loe_grid: usize,
    #[arg(short, long, default_value_t = 1)]
    jobs: usize,
}

#[derive(clap::Args, Debug)]
pub struct CompareArgs {
    input: PathBuf,
    /// Output directory.
    #[arg(short, long, env = "ROPE_OUTPUT_DIR")]
    output: Option<PathBuf>,
    #[command(flatten)]
    params: ParamArgs,
    /// Format of the metrics table file.
    #[arg(short, long, value_enum, default_value = "json")]
    format: ReportFormat,
    #[arg(short, long, default_value_t = 1)]
    jobs: usize,
}

fn thread_pool(jobs: usize) -> anyhow::Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Enhance(args) => enhance::run(args),
        Command::Metrics(args) => metrics::run(args),
        Command::Compare(args) => compare::run(args),
    };
    match result {
        Ok(0) => ExitCode::SUCCESS,
        Ok(failed) => {
            eprintln!("rope: {failed} item(s) failed");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("rope: {e:#}");
            ExitCode::FAILURE
        }
    }
}
