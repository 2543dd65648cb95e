//! Online forecasters: the second-order VAW forecaster, first-order
//! baselines, and the offline ridge comparator used to measure regret.

mod first_order;
mod ridge;
mod vaw;

pub use first_order::{
    FirstOrderState, OptimizerKind, StepError, ADAM_BETA1, ADAM_BETA2, ADAM_EPSILON,
};
pub use ridge::{ridge_comparator, vaw_regret_bound};
pub use vaw::{VawForecaster, DEFAULT_REFRESH_INTERVAL};
