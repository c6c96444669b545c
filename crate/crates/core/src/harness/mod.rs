//! Seeded Monte-Carlo sweeps over SNR or position error, CSV output and
//! gnuplot script generation.
//!
//! Every (sweep point, trial) pair draws its own random stream from
//! `(seed, sweep index, trial index, attempt)`, so results do not depend on
//! how many worker threads run them.

mod config;
mod output;
mod plot;
mod run;

pub use config::{EstimatorKind, ExperimentConfig, SweepAxis};
pub use output::{emit_csv, emit_summary_csv, median, read_csv, summarize, SummaryRow, CSV_HEADER};
pub use plot::{emit_plot_script, lambda_label, median_curves};
pub use run::{
    run_experiment, simulate_trial, static_ris_baseline, trial_seed, ExperimentOutcome, ResultRow,
    MAX_ATTEMPTS,
};
