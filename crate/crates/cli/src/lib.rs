//! Command-line experiment driver. `elastica run --config <toml>` runs
//! one named experiment and writes CSV plot data plus a TOML summary;
//! `elastica list` enumerates the experiments and their parameters.
//!
//! Exit codes: 0 all checks passed, 1 a check failed, 2 configuration
//! error. Output directory resolution: `--out` flag, then the `output`
//! config key, then the ELASTICA_OUT environment variable, then the
//! current directory.

pub mod config;
pub mod experiments;
pub mod report;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};

pub use config::RunConfig;
pub use experiments::{run_experiment, EXPERIMENTS};
pub use report::{emit_report, ExperimentOutput, RunReport};

pub const OUTPUT_ENV: &str = "ELASTICA_OUT";

#[derive(Debug)]
pub enum CliError {
    /// Bad configuration, unknown experiment, invalid parameters, or an
    /// unusable output location. Exit code 2.
    Config(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}

#[derive(Parser)]
#[command(name = "elastica", about = "lattice elasticity experiment runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a TOML config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override the seed from the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List available experiments and their parameters.
    List,
}

fn resolve_output(flag: Option<PathBuf>, config: &RunConfig) -> PathBuf {
    flag.or_else(|| config.output.clone())
        .or_else(|| std::env::var_os(OUTPUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

/// Full run pipeline, reusable from tests: returns the report and the
/// directory written to.
pub fn execute_run(
    config_path: &std::path::Path,
    seed: Option<u64>,
    out: Option<PathBuf>,
) -> Result<RunReport, CliError> {
    let mut config = RunConfig::load(config_path)?;
    if let Some(s) = seed {
        config.seed = s;
    }
    let dir = resolve_output(out, &config);
    let output = run_experiment(&config)?;
    emit_report(&config, &output, &dir)
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            for (name, desc) in EXPERIMENTS {
                println!("{name:<15} {desc}");
            }
            0
        }
        Command::Run { config, seed, out } => {
            let started = Instant::now();
            match execute_run(&config, seed, out) {
                Ok(report) => {
                    let elapsed = started.elapsed().as_secs_f64();
                    for (check, ok) in &report.output.checks {
                        println!("{check}: {}", if *ok { "pass" } else { "FAIL" });
                    }
                    for file in &report.files {
                        println!("wrote {}", file.display());
                    }
                    println!(
                        "{}: {} in {elapsed:.2}s",
                        report.experiment,
                        if report.output.all_passed() {
                            "ok"
                        } else {
                            "check failures"
                        }
                    );
                    if report.output.all_passed() {
                        0
                    } else {
                        1
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    2
                }
            }
        }
    }
}
