mod cmd;
mod error;
mod io;
mod units;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sdooop::Distance;

use crate::error::CliError;
use crate::units::parse_duration;

/// Streaming outlier detection with periodic observer models.
#[derive(Debug, Parser)]
#[command(name = "sdooop", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a labeled synthetic stream.
    Gen(GenArgs),
    /// Score a stream, one output row per input row.
    Score(ScoreArgs),
    /// Compute ranking metrics for a score file against labels.
    Eval(EvalArgs),
    /// Export spectra, temporal shapes, observers or sampling counts.
    Inspect(InspectArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Preset {
    Poc,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Built-in stream layout.
    #[arg(long, value_enum, required_unless_present = "spec", conflicts_with = "spec")]
    pub preset: Option<Preset>,
    /// JSON stream specification.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Contextual outliers as a fraction of normal points (preset only).
    #[arg(long, conflicts_with = "spec")]
    pub contextual_rate: Option<f64>,
    /// Spatial outliers as a fraction of normal points (preset only).
    #[arg(long, conflicts_with = "spec")]
    pub spatial_rate: Option<f64>,
    /// Base period of the preset.
    #[arg(long = "T0", value_parser = parse_duration, conflicts_with = "spec")]
    pub t_period: Option<f64>,
    /// Stream length in base periods (preset only).
    #[arg(long, conflicts_with = "spec")]
    pub periods: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file, stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Sdooop,
    Swknn,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[arg(long, value_enum, default_value = "sdooop")]
    pub algo: Algo,
    /// Number of observers.
    #[arg(long, default_value_t = 200)]
    pub k: usize,
    /// Nearest observers per point.
    #[arg(long, default_value_t = 5)]
    pub x: usize,
    /// EWMA time constant, e.g. `1w`.
    #[arg(long = "T", value_parser = parse_duration)]
    pub t_ewma: Option<f64>,
    /// Base period of the Fourier basis, e.g. `2000m`.
    #[arg(long = "T0", value_parser = parse_duration)]
    pub t_period: Option<f64>,
    /// Frequency bins.
    #[arg(long, default_value_t = 8)]
    pub bins: usize,
    /// Idle fraction of observers.
    #[arg(long, default_value_t = 0.2)]
    pub qid: f64,
    #[arg(long, value_parser = parse_distance, default_value = "euclidean")]
    pub distance: Distance,
    /// Sliding window length for swknn.
    #[arg(long, value_parser = parse_duration)]
    pub window: Option<f64>,
    /// Neighbor rank for swknn.
    #[arg(long, default_value_t = 5)]
    pub knn: usize,
    /// Median of this many models seeded `seed..seed+M`.
    #[arg(long)]
    pub ensemble: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the model state here at end of stream.
    #[arg(long)]
    pub model_out: Option<PathBuf>,
    /// Also write the model state every time this much stream time passes.
    #[arg(long, value_parser = parse_duration, requires = "model_out")]
    pub checkpoint_every: Option<f64>,
    /// Input stream, stdin when omitted or `-`.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Score output, stdout when omitted or `-`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Score CSV from `score`.
    #[arg(long)]
    pub scores: PathBuf,
    /// CSV with a `label` column aligned row by row; defaults to a `label`
    /// column in the score file.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// Ignore rows flagged as warmup.
    #[arg(long)]
    pub drop_warmup: bool,
    /// Add one row per outlier class against the normal points.
    #[arg(long)]
    pub by_class: bool,
    /// Metrics CSV; the human-readable table always goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("view").required(true).args(["spectrum", "shape", "observers", "sampling_log"])))]
pub struct InspectArgs {
    /// Model file written by `score --model-out`.
    #[arg(long, required_unless_present = "sampling_log")]
    pub model: Option<PathBuf>,
    /// Ensemble member to inspect.
    #[arg(long, default_value_t = 0)]
    pub member: usize,
    /// Magnitude of every Fourier coefficient per observer.
    #[arg(long)]
    pub spectrum: bool,
    /// Temporal shape of every observer over a horizon.
    #[arg(long, requires = "horizon")]
    pub shape: bool,
    #[arg(long, value_parser = parse_duration)]
    pub horizon: Option<f64>,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    /// Position, mass and activity of every observer.
    #[arg(long)]
    pub observers: bool,
    /// Count sampled points per interval of a score file.
    #[arg(long, requires_all = ["scores", "interval"])]
    pub sampling_log: bool,
    #[arg(long)]
    pub scores: Option<PathBuf>,
    #[arg(long, value_parser = parse_duration)]
    pub interval: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_distance(s: &str) -> Result<Distance, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen(a) => cmd::gen::run(a),
        Command::Score(a) => cmd::score::run(a),
        Command::Eval(a) => cmd::eval::run(a),
        Command::Inspect(a) => cmd::inspect::run(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Io { source, .. }) if source.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
