//! Experiment driver: loss sweeps, rate fits, blow-up probes, reports and
//! the command line.

mod blowup;
mod cli;
mod config;
mod fit;
mod report;
mod sweep;

pub use blowup::{energy_table, run_blowup_probe, BlowupReport, BlowupRow};
pub use cli::cli_main;
pub use config::{log_delta_grid, ExperimentConfig, LensConfig, NmaxPolicy, OUTPUT_DIR_ENV};
pub use fit::{fit_rate, RateFit};
pub use report::{
    config_from_summary, emit_blowup_report, emit_report, read_rate_csv, read_summary, BlowupSummary, Summary,
    BLOWUP_CSV, BLOWUP_JSON, SWEEP_CSV, SWEEP_JSON,
};
pub use sweep::{
    hat_reference, incident_coefficients, probe_field_error, run_delta_sweep, spectral_error, ConvergenceReport,
    ProbeConstant, SweepRow,
};
