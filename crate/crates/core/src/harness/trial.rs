use serde::Serialize;

use crate::error::{Result, UspError};
use crate::forecasters::{FirstOrderState, StepError, VawForecaster};
use crate::lds::{gen_inputs_ar1, gen_inputs_decaying, generate_system_with, simulate, LdsSystem, SignalTrace};
use crate::precondition::{push_input_lags, push_output_lags, PreconditionConfig, PreconditionMode, Preconditioner};

use super::config::{ExperimentConfig, InputMode, Method};

/// Denominator guard in the normalized error.
pub const ERROR_EPSILON: f64 = 1e-8;

/// `|y − ŷ| / (|y| + 1e-8)`.
#[inline]
pub fn normalized_error(y: f64, y_hat: f64) -> f64 {
    (y - y_hat).abs() / (y.abs() + ERROR_EPSILON)
}

/// Mean of the last `window` entries; `+∞` when there are none.
pub fn steady_state_mean(errors: &[f64], window: usize) -> f64 {
    let tail = &errors[errors.len().saturating_sub(window)..];
    if tail.is_empty() || window == 0 {
        return f64::INFINITY;
    }
    tail.iter().sum::<f64>() / tail.len() as f64
}

/// The system and signal shared by every cell that uses this trial seed.
#[derive(Debug, Clone)]
pub struct TrialData {
    pub seed: u64,
    pub system: LdsSystem<f64>,
    pub trace: SignalTrace<f64>,
}

impl TrialData {
    pub fn generate(config: &ExperimentConfig, seed: u64) -> Result<Self> {
        let system = generate_system_with(config.hidden_dim, config.delta, config.spectrum(), seed)?;
        let inputs = match config.input_mode {
            InputMode::Decaying => gen_inputs_decaying(config.horizon, seed),
            InputMode::Ar1 { rho } => gen_inputs_ar1(config.horizon, rho, seed)?,
        };
        let trace = simulate(&system, &inputs, config.noise_sigma, seed)?;
        Ok(Self { seed, system, trace })
    }
}

/// Trial data for seeds `base_seed .. base_seed + trials`.
pub fn generate_trials(config: &ExperimentConfig) -> Result<Vec<TrialData>> {
    use rayon::prelude::*;
    (0..config.trials).into_par_iter().map(|i| TrialData::generate(config, config.trial_seed(i))).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub method: Method,
    pub mode: PreconditionMode,
    pub degree: usize,
    pub hyperparam: f64,
    pub seed: u64,
    pub per_step_normalized_error: Vec<f64>,
    pub per_step_squared_error: Vec<f64>,
    pub steady_state_mean: f64,
    pub diverged: bool,
}

impl TrialRecord {
    pub fn recompute_steady_state(&self, window: usize) -> f64 {
        if self.diverged {
            f64::INFINITY
        } else {
            steady_state_mean(&self.per_step_normalized_error, window)
        }
    }
}

enum Learner {
    /// Zero-dimensional feature space: always predicts 0.
    Null,
    Vaw(VawForecaster<f64>),
    FirstOrder(FirstOrderState<f64>),
}

impl Learner {
    fn new(method: Method, dim: usize, hyperparam: f64) -> Result<Self> {
        if dim == 0 {
            return Ok(Self::Null);
        }
        Ok(match method.optimizer() {
            None => Self::Vaw(VawForecaster::new(dim, hyperparam)?),
            Some(kind) => Self::FirstOrder(FirstOrderState::new(kind, dim, hyperparam)?),
        })
    }

    /// Prediction for this round, or `None` once the learner has diverged.
    fn round(&mut self, feature: &[f64], label: f64) -> Result<Option<f64>> {
        match self {
            Self::Null => Ok(Some(0.0)),
            Self::Vaw(v) => {
                let p = v.predict(feature)?;
                if !p.is_finite() {
                    return Ok(None);
                }
                v.observe(feature, label)?;
                Ok(Some(p))
            }
            Self::FirstOrder(f) => match f.step(feature, label) {
                Ok(p) => Ok(Some(p)),
                Err(StepError::Diverged) => Ok(None),
                Err(StepError::Input(e)) => Err(e),
            },
        }
    }
}

/// Runs one online pass over `data`, predicting before observing each label.
pub fn run_trial_on(
    config: &ExperimentConfig,
    data: &TrialData,
    method: Method,
    mode: PreconditionMode,
    degree: usize,
    hyperparam: f64,
) -> Result<TrialRecord> {
    let pc = PreconditionConfig::new(degree, mode, config.baseline_window)?;
    let dim = pc.feature_dim();
    let mut learner = Learner::new(method, dim, hyperparam)?;
    let filter = Preconditioner::<f64>::chebyshev(if mode == PreconditionMode::ChebyshevFixed { degree } else { 0 });
    let (y, u) = (&data.trace.outputs, &data.trace.inputs);
    let horizon = y.len();
    if u.len() != horizon {
        return Err(UspError::DimensionMismatch { expected: horizon, found: u.len() });
    }

    let mut normalized = Vec::with_capacity(horizon);
    let mut squared = Vec::with_capacity(horizon);
    let mut feature = Vec::with_capacity(dim);
    let mut diverged = false;
    for t in 1..=horizon {
        feature.clear();
        let y_t = y[t - 1];
        // label fed to the learner, and the shift mapping its output back to ŷ_t
        let (label, shift) = match mode {
            PreconditionMode::None => {
                push_output_lags(&mut feature, y, t, config.baseline_window);
                push_input_lags(&mut feature, u, t, config.baseline_window);
                (y_t, 0.0)
            }
            PreconditionMode::Learnable => {
                push_output_lags(&mut feature, y, t, degree);
                push_input_lags(&mut feature, u, t, degree);
                (y_t, 0.0)
            }
            PreconditionMode::ChebyshevFixed => {
                push_input_lags(&mut feature, u, t, degree);
                let h = filter.history_term(y, t);
                (y_t + h, -h)
            }
            PreconditionMode::Differencing => {
                push_input_lags(&mut feature, u, t, degree);
                let prev = if t >= 2 { y[t - 2] } else { 0.0 };
                (y_t - prev, prev)
            }
        };
        let y_hat = match learner.round(&feature, label)? {
            Some(p) if (p + shift).is_finite() => p + shift,
            _ => {
                diverged = true;
                break;
            }
        };
        normalized.push(normalized_error(y_t, y_hat));
        squared.push((y_t - y_hat) * (y_t - y_hat));
    }

    let steady = if diverged { f64::INFINITY } else { steady_state_mean(&normalized, config.steady_window) };
    Ok(TrialRecord {
        method,
        mode,
        degree,
        hyperparam,
        seed: data.seed,
        per_step_normalized_error: normalized,
        per_step_squared_error: squared,
        steady_state_mean: steady,
        diverged,
    })
}

/// Regenerates the trial from `seed` and runs it.
pub fn run_trial(
    config: &ExperimentConfig,
    method: Method,
    mode: PreconditionMode,
    degree: usize,
    hyperparam: f64,
    seed: u64,
) -> Result<TrialRecord> {
    config.validate()?;
    let data = TrialData::generate(config, seed)?;
    run_trial_on(config, &data, method, mode, degree, hyperparam)
}
