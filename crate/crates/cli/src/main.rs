use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fris_ce::harness::{
    emit_csv, emit_plot_script, emit_summary_csv, run_experiment, summarize, ExperimentConfig,
};

/// Monte-Carlo channel-estimation experiments for fluid-RIS uplinks.
#[derive(Debug, Parser)]
#[command(name = "fris-ce", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a sweep and write per-trial results as CSV.
    Run {
        /// JSON experiment configuration.
        #[arg(long)]
        config: PathBuf,
        /// Override the configured seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the configured output CSV path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a gnuplot script here.
        #[arg(long)]
        plot: Option<PathBuf>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Parse and check a configuration without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

enum Failure {
    Config(fris_ce::Error),
    Runtime(fris_ce::Error),
}

fn load(path: &Path) -> Result<ExperimentConfig, Failure> {
    ExperimentConfig::load(path).map_err(Failure::Config)
}

/// `results.csv` -> `results.summary.csv`
fn summary_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{stem}.summary.csv"))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { config } => {
            let cfg = load(&config)?;
            println!(
                "{}: ok ({} sweep, {} points, {} trials, {} estimators)",
                config.display(),
                cfg.sweep_axis,
                cfg.sweep_values.len(),
                cfg.system.trials,
                cfg.estimators.len()
            );
            Ok(())
        }
        Command::Run {
            config,
            seed,
            out,
            plot,
            threads,
        } => {
            let mut cfg = load(&config)?;
            if let Some(seed) = seed {
                cfg.system.seed = seed;
            }
            if let Some(out) = out {
                cfg.output_path = out;
            }
            if threads == Some(0) {
                return Err(Failure::Config(fris_ce::Error::Config(
                    "--threads must be at least 1".into(),
                )));
            }
            let outcome = run_experiment(&cfg, threads).map_err(|e| {
                if e.is_config() {
                    Failure::Config(e)
                } else {
                    Failure::Runtime(e)
                }
            })?;
            emit_csv(&outcome.rows, &cfg.output_path).map_err(Failure::Runtime)?;
            let summary = summary_path(&cfg.output_path);
            emit_summary_csv(&summarize(&outcome.rows), &summary).map_err(Failure::Runtime)?;
            log::info!(
                "wrote {} and {}",
                cfg.output_path.display(),
                summary.display()
            );
            if let Some(plot) = plot {
                emit_plot_script(&outcome.rows, &cfg.output_path, &plot)
                    .map_err(Failure::Runtime)?;
                log::info!("wrote {}", plot.display());
            }
            println!(
                "{} rows written to {} ({} resampled trials)",
                outcome.rows.len(),
                cfg.output_path.display(),
                outcome.resamples
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("FRIS_CE_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
