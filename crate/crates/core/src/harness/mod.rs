//! Seeded Monte-Carlo experiments: configuration, trial pipeline and CSV
//! output.
//!
//! # Seeding
//!
//! A single master seed drives everything. Trial `t` of an experiment uses
//! `derive_seed(seed, [t])` as its trial seed, shared by every SNR and path
//! count cell so that cells see common random numbers. Within a trial the
//! symbol grid, the sensing noise and the solver initialization each get
//! their own stream, `derive_seed(trial_seed, [tag])`. A trial can therefore
//! be replayed on its own, and results never depend on the worker count.

mod config;
mod experiments;
mod output;

pub use config::{
    load_config, parse_config, BerCase, BerConfig, CodeConfig, EcdfConfig, ExperimentConfig,
    GridConfig, LocateConfig, OutputConfig, ReflectorConfig, Scale, ScenarioConfig, SweepConfig,
    TargetConfig,
};
pub use experiments::{
    locate_once, run_ber_sweep, run_ecdf, run_ecdf_with, run_rmse_sweep, run_rmse_sweep_with,
    run_trial, trial_seed, BerRow, EcdfRow, LocateReport, PairedTrial, RmseRow, StageTimings,
    TrialContext, TrialRecord,
};
pub use output::{config_hash, percentile, write_csv, CsvTable};
