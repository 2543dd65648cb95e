//! Experiment orchestration: trial generation, online runs, grid search,
//! degree sweeps, the signal-norm study and regret audits.
//!
//! Trial `i` of a configuration uses seed `base_seed + i`; the system, inputs
//! and noise of a trial come from independent streams of that seed, and all
//! hyperparameters of a grid see the same trials.

mod audit;
mod bounds;
mod config;
mod norms;
pub mod output;
mod sweep;
mod trial;

pub use audit::{regret_audit, regret_audit_on, theorem_degree, RegretReport};
pub use bounds::{run_bound_checks, BoundsConfig, BoundsSummary};
pub use config::{ExperimentConfig, InputMode, Method};
pub use norms::{max_abs, signal_norm_experiment, NormRow, SignalTransform};
pub use sweep::{
    grid_search, grid_search_with, quantile_sorted, quartiles, sweep_degrees, sweep_degrees_with, GridCandidate, GridResult,
    SweepCell, SweepSummary,
};
pub use trial::{
    generate_trials, normalized_error, run_trial, run_trial_on, steady_state_mean, TrialData, TrialRecord, ERROR_EPSILON,
};
