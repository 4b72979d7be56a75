//! Batch front-end for `fscan`: scans over series and images, crossed-module
//! checks, and a scan benchmark.
//!
//! Exit codes: 0 success, 1 parse error, 2 validation error (shapes,
//! boundaries, ranges), 3 numeric failure (singular matrices, faces outside
//! the feedback image, failed checks).

pub mod commands;
pub mod config;
pub mod error;
pub mod input;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::commands::Report;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

pub const WORKERS_ENV: &str = "FSCAN_WORKERS";

#[derive(Debug, Parser)]
#[command(
    name = "fscan",
    version,
    about = "Interval and rectangle aggregation by parallel scans"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Prefix scan of a series, or the aggregate over one interval.
    #[command(name = "scan1d")]
    Scan1d {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long, num_args = 2, value_names = ["M", "N"], allow_negative_numbers = true)]
        interval: Option<Vec<i64>>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Prefix grid of a face grid or image, or the aggregate over one rectangle.
    #[command(name = "scan2d")]
    Scan2d {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long, num_args = 4, value_names = ["S1", "T1", "S2", "T2"])]
        rect: Option<Vec<usize>>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Sampled crossed-module axioms, interchange and boundary law.
    Check {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Defaults to the config seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Scan throughput on random dense matrices, as CSV.
    Bench {
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', num_args = 1.., default_value = "1,2,4,8")]
        workers: Vec<usize>,
        #[arg(long, default_value_t = 32)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// `--workers`, then the environment, then the config, then 1.
fn resolve_workers(flag: Option<usize>, cfg: &RunConfig) -> CliResult<usize> {
    let from_env =
        match std::env::var(WORKERS_ENV) {
            Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| {
                CliError::Parse(format!("{WORKERS_ENV}={v:?} is not a worker count"))
            })?),
            Err(_) => None,
        };
    let workers = flag.or(from_env).or(cfg.workers).unwrap_or(1);
    if workers == 0 {
        return Err(CliError::Validation("workers must be at least 1".into()));
    }
    Ok(workers)
}

fn dispatch(command: Command) -> CliResult<Report> {
    match command {
        Command::Scan1d {
            input,
            config,
            interval,
            workers,
        } => {
            let cfg = RunConfig::load(&config)?;
            let workers = resolve_workers(workers, &cfg)?;
            let interval = interval.map(|v| (v[0], v[1]));
            commands::scan1d(&input, &cfg, interval, workers).map(Report::from)
        }
        Command::Scan2d {
            input,
            config,
            rect,
            workers,
        } => {
            let cfg = RunConfig::load(&config)?;
            let workers = resolve_workers(workers, &cfg)?;
            let rect = rect.map(|v| [v[0], v[1], v[2], v[3]]);
            commands::scan2d(&input, &cfg, rect, workers).map(Report::from)
        }
        Command::Check {
            config,
            samples,
            seed,
        } => {
            let cfg = RunConfig::load(&config)?;
            let seed = seed.unwrap_or(cfg.seed);
            commands::check(&cfg, samples, seed)
        }
        Command::Bench {
            sizes,
            workers,
            dim,
            seed,
        } => commands::bench(&sizes, &workers, dim, seed).map(Report::from),
    }
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                1
            } else {
                let _ = write!(stdout, "{}", e.render());
                0
            };
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(report) => {
            let _ = stdout.write_all(report.stdout.as_bytes());
            let _ = stderr.write_all(report.stderr.as_bytes());
            report.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "fscan: {e}");
            e.exit_code()
        }
    }
}
