use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::forecasters::OptimizerKind;
use crate::lds::SpectrumBound;
use crate::precondition::{PreconditionMode, MAX_DEGREE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Ogd,
    Adam,
    Vaw,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Self::Ogd => "ogd",
            Self::Adam => "adam",
            Self::Vaw => "vaw",
        }
    }

    pub fn optimizer(self) -> Option<OptimizerKind> {
        match self {
            Self::Ogd => Some(OptimizerKind::Ogd),
            Self::Adam => Some(OptimizerKind::Adam),
            Self::Vaw => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum InputMode {
    Decaying,
    Ar1 { rho: f64 },
}

/// Everything needed to regenerate a batch of trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub hidden_dim: usize,
    pub horizon: usize,
    pub delta: f64,
    /// Bound on `|Im λ|`; ignored when `arg_bound` is set.
    pub tau: f64,
    /// Bound on `|arg λ|` instead of the imaginary part.
    pub arg_bound: Option<f64>,
    pub noise_sigma: f64,
    pub input_mode: InputMode,
    pub degree_min: usize,
    pub degree_max: usize,
    pub methods: Vec<Method>,
    pub precondition_modes: Vec<PreconditionMode>,
    pub lr_grid: Vec<f64>,
    pub lambda_grid: Vec<f64>,
    pub trials: usize,
    pub base_seed: u64,
    pub steady_window: usize,
    pub baseline_window: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self::high_dim()
    }
}

impl ExperimentConfig {
    /// `d = w = 100`, `T = 5000`.
    pub fn high_dim() -> Self {
        Self {
            hidden_dim: 100,
            horizon: 5000,
            delta: 1e-7,
            tau: 0.1,
            arg_bound: None,
            noise_sigma: 0.01,
            input_mode: InputMode::Decaying,
            degree_min: 0,
            degree_max: 30,
            methods: vec![Method::Ogd, Method::Adam, Method::Vaw],
            precondition_modes: vec![PreconditionMode::None, PreconditionMode::ChebyshevFixed, PreconditionMode::Learnable],
            lr_grid: vec![1e-4, 1e-3, 0.01, 0.05, 0.1],
            lambda_grid: vec![1e-2, 1e-1, 1.0, 10.0, 100.0, 1000.0],
            trials: 10,
            base_seed: 0,
            steady_window: 200,
            baseline_window: 100,
        }
    }

    /// `d = w = 10`, `T = 5000`.
    pub fn low_dim() -> Self {
        Self { hidden_dim: 10, baseline_window: 10, ..Self::high_dim() }
    }

    /// `d = w = 30`, `T = 2000`: a reduced high-dimensional run.
    pub fn scaled() -> Self {
        Self { hidden_dim: 30, baseline_window: 30, horizon: 2000, ..Self::high_dim() }
    }

    /// Noiseless `d = w = 10`, `T = 5000`, `|arg λ| ≤ 1/576`.
    pub fn noiseless_sector() -> Self {
        Self {
            hidden_dim: 10,
            baseline_window: 10,
            noise_sigma: 0.0,
            arg_bound: Some(1.0 / 576.0),
            ..Self::high_dim()
        }
    }

    pub fn spectrum(&self) -> SpectrumBound<f64> {
        match self.arg_bound {
            Some(s) => SpectrumBound::Arg(s),
            None => SpectrumBound::Imag(self.tau),
        }
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<usize> {
        self.degree_min..=self.degree_max
    }

    pub fn trial_seed(&self, trial: usize) -> u64 {
        self.base_seed.wrapping_add(trial as u64)
    }

    pub fn grid(&self, method: Method) -> &[f64] {
        match method {
            Method::Vaw => &self.lambda_grid,
            Method::Ogd | Method::Adam => &self.lr_grid,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.hidden_dim == 0 {
            return Err(invalid("hidden_dim must be at least 1"));
        }
        if self.horizon == 0 {
            return Err(invalid("horizon must be at least 1"));
        }
        if self.steady_window == 0 || self.steady_window > self.horizon {
            return Err(invalid(format!("steady_window must lie in [1, {}]", self.horizon)));
        }
        if self.baseline_window == 0 {
            return Err(invalid("baseline_window must be at least 1"));
        }
        if self.degree_min > self.degree_max || self.degree_max > MAX_DEGREE {
            return Err(invalid(format!(
                "degree range [{}, {}] must be ordered and at most {MAX_DEGREE}",
                self.degree_min, self.degree_max
            )));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(invalid("noise_sigma must be finite and non-negative"));
        }
        if let InputMode::Ar1 { rho } = self.input_mode {
            if !(rho.abs() < 1.0) {
                return Err(invalid(format!("AR(1) coefficient must satisfy |rho| < 1, got {rho}")));
            }
        }
        if self.trials == 0 {
            return Err(invalid("trials must be at least 1"));
        }
        for &m in &self.methods {
            let grid = self.grid(m);
            if grid.is_empty() {
                return Err(invalid(format!("hyperparameter grid for {} is empty", m.name())));
            }
            if grid.iter().any(|&g| !(g > 0.0 && g.is_finite())) {
                return Err(invalid(format!("hyperparameter grid for {} must be positive and finite", m.name())));
            }
        }
        Ok(())
    }
}
