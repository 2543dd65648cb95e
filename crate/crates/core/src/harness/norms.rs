use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::precondition::{difference_signal, Preconditioner, MAX_DEGREE};

use super::config::ExperimentConfig;
use super::sweep::quartiles;
use super::trial::TrialData;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalTransform {
    Raw,
    Chebyshev,
    Differenced,
}

impl SignalTransform {
    pub fn name(self) -> &'static str {
        match self {
            Self::Raw => "raw",
            Self::Chebyshev => "chebyshev",
            Self::Differenced => "differenced",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormRow {
    pub transform: SignalTransform,
    pub degree: usize,
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
}

pub fn max_abs(signal: &[f64]) -> f64 {
    signal.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Per-trial maxima `(raw, differenced, chebyshev per degree)` on the observed outputs.
fn trial_maxima(config: &ExperimentConfig, seed: u64, filters: &[Preconditioner<f64>]) -> Result<(f64, f64, Vec<f64>)> {
    let data = TrialData::generate(config, seed)?;
    let y = &data.trace.outputs;
    let cheby = filters.iter().map(|f| max_abs(&f.apply(y))).collect();
    Ok((max_abs(y), max_abs(&difference_signal(y)), cheby))
}

/// Median and interquartile range of `max_t |signal_t|` over `trials` seeds
/// for the raw, Chebyshev-filtered and differenced outputs.
///
/// Rows come grouped by degree in the order given, then by transform. The raw
/// and differenced rows repeat on every degree.
pub fn signal_norm_experiment(config: &ExperimentConfig, degrees: &[usize], trials: usize) -> Result<Vec<NormRow>> {
    config.validate()?;
    if trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    if let Some(&n) = degrees.iter().find(|&&n| n > MAX_DEGREE) {
        return Err(invalid(format!("degree {n} exceeds the supported maximum {MAX_DEGREE}")));
    }
    let filters: Vec<Preconditioner<f64>> = degrees.iter().map(|&n| Preconditioner::chebyshev(n)).collect();
    let per_trial: Vec<(f64, f64, Vec<f64>)> =
        (0..trials).into_par_iter().map(|i| trial_maxima(config, config.trial_seed(i), &filters)).collect::<Result<_>>()?;

    let raw: Vec<f64> = per_trial.iter().map(|t| t.0).collect();
    let diff: Vec<f64> = per_trial.iter().map(|t| t.1).collect();
    let row = |transform, degree, values: &[f64]| {
        let (q25, median, q75) = quartiles(values);
        NormRow { transform, degree, median, q25, q75 }
    };
    let mut rows = Vec::with_capacity(3 * degrees.len());
    for (k, &n) in degrees.iter().enumerate() {
        let cheby: Vec<f64> = per_trial.iter().map(|t| t.2[k]).collect();
        rows.push(row(SignalTransform::Raw, n, &raw));
        rows.push(row(SignalTransform::Chebyshev, n, &cheby));
        rows.push(row(SignalTransform::Differenced, n, &diff));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn differenced_constant_keeps_first_value() {
        let y = vec![3.5; 20];
        assert_eq!(max_abs(&difference_signal(&y)), 3.5);
    }

    #[test]
    fn degree_zero_filter_is_identity() {
        let c = ExperimentConfig { hidden_dim: 6, horizon: 400, steady_window: 100, ..ExperimentConfig::high_dim() };
        let rows = signal_norm_experiment(&c, &[0, 4], 5).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[0].transform, SignalTransform::Raw);
        assert_eq!((rows[0].median, rows[0].q25, rows[0].q75), (rows[1].median, rows[1].q25, rows[1].q75));
        assert_eq!(rows[0].median, rows[3].median);
        for r in &rows {
            assert!(r.q25 <= r.median && r.median <= r.q75);
        }
    }
}
