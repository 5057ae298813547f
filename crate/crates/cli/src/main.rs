//! `ripbound`: bounds on restricted isometry constants of Gaussian matrices.

// `!(x > 0.0)` style guards deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ripbound::mc_lab::{Ensemble, DEFAULT_SUPPORT_CAP};
use ripbound::rip_bounds::DEFAULT_N_MAX;
use ripbound::Error;

use table::Format;

const THREADS_VAR: &str = "RIPBOUND_THREADS";

#[derive(Debug, Parser)]
#[command(name = "ripbound", version, about = "Bounds on RIP constants of scaled Gaussian matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write to this file (with a `.manifest` alongside) instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Confidence {
    /// Confidence level of the bounds.
    #[arg(long, default_value_t = 0.99)]
    confidence: f64,
    /// Constant C of the probability floors.
    #[arg(long = "const-c", default_value_t = 1.0)]
    const_c: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lower, new upper and classical upper bounds at one (n, N, s).
    Bounds {
        /// Number of measurements.
        #[arg(long)]
        n: usize,
        /// Ambient dimension.
        #[arg(long = "N")]
        ambient: usize,
        /// Sparsity.
        #[arg(long)]
        s: usize,
        #[command(flatten)]
        conf: Confidence,
        /// Use this tail slack instead of the one derived from the confidence.
        #[arg(long)]
        eps: Option<f64>,
        /// Constants of the classical bound.
        #[arg(long, default_value_t = 1.0)]
        c1: f64,
        #[arg(long, default_value_t = 1.0)]
        c2: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Bound curves against compression rate N/n as CSV, optionally with SVG.
    Curve {
        #[arg(long = "N", default_value_t = 1000)]
        ambient: usize,
        /// Sparsity level s/N; repeatable.
        #[arg(long, num_args = 1.., default_values_t = [0.1, 0.01, 0.001])]
        sparsity: Vec<f64>,
        #[arg(long = "rate-min", default_value_t = 1.25)]
        rate_min: f64,
        #[arg(long = "rate-max", default_value_t = 20.0)]
        rate_max: f64,
        /// Number of equally spaced rates; a single point sits at `--rate-min`.
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[command(flatten)]
        conf: Confidence,
        #[arg(long, default_value_t = 1.0)]
        c1: f64,
        #[arg(long, default_value_t = 1.0)]
        c2: f64,
        /// CSV destination; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Combined chart with one polyline per (sparsity level, bound kind).
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Also write one chart per sparsity level next to `--svg`.
        #[arg(long = "svg-panels", requires = "svg")]
        svg_panels: bool,
    },
    /// Adversarial certificates over seeded random matrices.
    Mc {
        #[arg(long)]
        n: usize,
        #[arg(long = "N")]
        ambient: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = Ensemble::Gaussian)]
        ensemble: Ensemble,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        conf: Confidence,
        /// Also write one CSV row per trial to this file.
        #[arg(long = "trials-out")]
        trials_out: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact one-sided RIP constants of one seeded matrix by enumeration.
    Exact {
        #[arg(long)]
        n: usize,
        #[arg(long = "N")]
        ambient: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = Ensemble::Gaussian)]
        ensemble: Ensemble,
        #[arg(long)]
        seed: u64,
        /// Refuse to enumerate more supports than this.
        #[arg(long, default_value_t = DEFAULT_SUPPORT_CAP)]
        cap: u128,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Monte Carlo check of the top-k order statistic concentration.
    Orderstats {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long = "const-c", default_value_t = 1.0)]
        const_c: f64,
        /// Tail slacks to report coverage for; repeatable.
        #[arg(long, num_args = 1.., default_values_t = [0.1, 0.2, 0.326, 0.5])]
        eps: Vec<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Minimal number of measurements for a target RIP constant.
    Minmeas {
        #[arg(long = "N")]
        ambient: usize,
        #[arg(long)]
        s: usize,
        /// Target RIP constant.
        #[arg(long, required_unless_present = "algorithm", conflicts_with = "algorithm")]
        delta: Option<f64>,
        /// Take order and target from a recovery algorithm's requirement.
        #[arg(long)]
        algorithm: Option<String>,
        #[command(flatten)]
        conf: Confidence,
        #[arg(long = "n-max", default_value_t = DEFAULT_N_MAX)]
        n_max: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Upper-tail quantile of chi2(1).
    Quantile {
        #[arg(long)]
        alpha: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Conditional tail expectation E(X | X > t) of chi2(1).
    Cte {
        #[arg(long, required_unless_present = "alpha", conflicts_with = "alpha")]
        t: Option<f64>,
        /// Use the threshold at this tail level.
        #[arg(long)]
        alpha: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io(_) | Error::Csv(_) => 3,
        Error::ResourceCap { .. } => 4,
        _ => 2,
    }
}

fn configure_threads() -> Result<(), Error> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Error::Domain(format!("{THREADS_VAR} must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Domain(format!("cannot size the worker pool: {e}")))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match configure_threads().and_then(|()| commands::run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
