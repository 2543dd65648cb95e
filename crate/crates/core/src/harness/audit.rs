use serde::Serialize;

use crate::error::{invalid, Result};
use crate::forecasters::{vaw_regret_bound, VawForecaster};
use crate::lds::{simulate, LdsSystem};
use crate::precondition::{build_feature_vector, residual_bound, residual_series, usp_benchmark};
use crate::scalar::{dot, norm_sq};

use super::config::ExperimentConfig;
use super::trial::TrialData;

/// `⌈3 log₂(‖C‖‖B‖κT)⌉`, at least 1.
pub fn theorem_degree(system: &LdsSystem<f64>, horizon: usize) -> usize {
    let scale = system.output_norm() * system.input_norm() * system.diag_condition * horizon as f64;
    (3.0 * scale.log2()).ceil().max(1.0) as usize
}

/// Measured loss of the VAW sequence predictor against the fixed benchmark `x*`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegretReport {
    pub hidden_dim: usize,
    pub horizon: usize,
    pub degree: usize,
    pub feature_dim: usize,
    pub kappa: f64,
    pub lambda: f64,
    /// `1/‖x*‖²`.
    pub lambda_floor: f64,
    pub precondition_met: bool,
    pub comparator_norm: f64,
    /// `Y = max |y_t|`.
    pub label_bound: f64,
    /// `R = max ‖a_t‖`.
    pub feature_bound: f64,
    /// `Σ ½(ŷ_t − y_t)²`.
    pub cumulative_loss: f64,
    /// `Σ ½(x*ᵀa_t − y_t)²`.
    pub comparator_loss: f64,
    /// `Σ ½ ε_t²` from the state-space residual.
    pub residual_loss: f64,
    pub regret: f64,
    /// Right-hand side with measured `Y`, `R` and `‖x*‖`.
    pub bound: f64,
    /// Same with `R² = n(Y² + 1)`.
    pub bound_feature_ceiling: f64,
    pub pass: bool,
    pub residual_max: f64,
    pub residual_ceiling: f64,
    /// `Σ (ŷ_t − y_t)²` over `t ≤ T/2` and `t > T/2`.
    pub first_half_squared_error: f64,
    pub second_half_squared_error: f64,
}

/// Runs the `2n`-feature VAW predictor on the noiseless outputs of `system`
/// driven by `inputs` and compares it with the benchmark of degree `n`.
///
/// Defaults: `n` from [`theorem_degree`], `λ = 1/‖x*‖²`.
pub fn regret_audit_on(
    system: &LdsSystem<f64>,
    inputs: &[f64],
    degree: Option<usize>,
    lambda: Option<f64>,
) -> Result<RegretReport> {
    let horizon = inputs.len();
    let trace = simulate(system, inputs, 0.0, 0)?;
    let y = &trace.outputs;
    let n = degree.unwrap_or_else(|| theorem_degree(system, horizon));
    let bench = usp_benchmark(system, n)?;
    let lambda_floor = bench.norm_sq.recip();
    let lambda = lambda.unwrap_or(lambda_floor);
    let mut vaw = VawForecaster::new(2 * n, lambda)?;

    let (mut loss, mut comparator, mut r_sq, mut halves) = (0.0, 0.0, 0.0f64, [0.0; 2]);
    for t in 1..=horizon {
        let a = build_feature_vector(y, inputs, t, n);
        let y_t = y[t - 1];
        let pred = vaw.predict(&a)?;
        vaw.observe(&a, y_t)?;
        let sq = (pred - y_t) * (pred - y_t);
        loss += 0.5 * sq;
        halves[usize::from(t > horizon / 2)] += sq;
        let miss = dot(&bench.vector, &a) - y_t;
        comparator += 0.5 * miss * miss;
        r_sq = r_sq.max(norm_sq(&a));
    }

    let eps = residual_series(system, inputs, n);
    let residual_loss = eps.iter().map(|e| 0.5 * e * e).sum();
    let residual_max = eps.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let label_bound = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let norm = bench.norm_sq.sqrt();
    let dim = 2 * n;
    let bound = vaw_regret_bound(label_bound, r_sq.sqrt(), dim, horizon, norm);
    let ceiling_r = (n as f64 * (label_bound * label_bound + 1.0)).sqrt();
    let bound_feature_ceiling = vaw_regret_bound(label_bound, ceiling_r, dim, horizon, norm);
    let regret = loss - comparator;
    let precondition_met = lambda >= lambda_floor * (1.0 - 1e-12);
    Ok(RegretReport {
        hidden_dim: system.hidden_dim,
        horizon,
        degree: n,
        feature_dim: dim,
        kappa: system.diag_condition,
        lambda,
        lambda_floor,
        precondition_met,
        comparator_norm: norm,
        label_bound,
        feature_bound: r_sq.sqrt(),
        cumulative_loss: loss,
        comparator_loss: comparator,
        residual_loss,
        regret,
        bound,
        bound_feature_ceiling,
        pass: precondition_met && regret <= bound,
        residual_max,
        residual_ceiling: residual_bound(system, horizon, n),
        first_half_squared_error: halves[0],
        second_half_squared_error: halves[1],
    })
}

/// Generates the trial for `seed` and audits it. Requires `noise_sigma = 0`.
pub fn regret_audit(config: &ExperimentConfig, degree: Option<usize>, lambda: Option<f64>, seed: u64) -> Result<RegretReport> {
    config.validate()?;
    if config.noise_sigma != 0.0 {
        return Err(invalid(format!("regret audit needs noiseless outputs, got noise_sigma = {}", config.noise_sigma)));
    }
    let data = TrialData::generate(config, seed)?;
    regret_audit_on(&data.system, &data.trace.inputs, degree, lambda)
}
