use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::precondition::PreconditionMode;

use super::config::{ExperimentConfig, Method};
use super::trial::{generate_trials, run_trial_on, TrialData};

/// Linear-interpolation quantile of sorted data (`q ∈ [0, 1]`), tolerant of
/// `+∞` entries.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty data");
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    let (a, b) = (sorted[lo], sorted[hi]);
    if frac == 0.0 || a == b {
        a
    } else {
        a + frac * (b - a)
    }
}

/// `(q25, median, q75)`.
pub fn quartiles(values: &[f64]) -> (f64, f64, f64) {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    (quantile_sorted(&v, 0.25), quantile_sorted(&v, 0.5), quantile_sorted(&v, 0.75))
}

/// One row of a degree sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCell {
    pub method: Method,
    pub mode: PreconditionMode,
    pub degree: usize,
    pub hyperparam: f64,
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
    pub n_diverged: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridCandidate {
    pub hyperparam: f64,
    pub median: f64,
    pub n_diverged: usize,
    pub steady_state_means: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridResult {
    /// Cell at the selected hyperparameter.
    pub cell: SweepCell,
    /// Every grid value in ascending order.
    pub candidates: Vec<GridCandidate>,
}

/// Grid search over the trials in `data`. Each grid value sees the same
/// systems and signals.
pub fn grid_search_with(
    config: &ExperimentConfig,
    data: &[TrialData],
    method: Method,
    mode: PreconditionMode,
    degree: usize,
) -> Result<GridResult> {
    let mut grid = config.grid(method).to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let jobs: Vec<(usize, usize)> = (0..grid.len()).flat_map(|g| (0..data.len()).map(move |k| (g, k))).collect();
    let outcomes: Vec<(f64, bool)> = jobs
        .par_iter()
        .map(|&(g, k)| run_trial_on(config, &data[k], method, mode, degree, grid[g]).map(|r| (r.steady_state_mean, r.diverged)))
        .collect::<Result<_>>()?;

    let candidates: Vec<GridCandidate> = grid
        .iter()
        .zip(outcomes.chunks(data.len()))
        .map(|(&hp, chunk)| {
            let means: Vec<f64> = chunk.iter().map(|o| o.0).collect();
            GridCandidate {
                hyperparam: hp,
                median: quartiles(&means).1,
                n_diverged: chunk.iter().filter(|o| o.1).count(),
                steady_state_means: means,
            }
        })
        .collect();

    let mut best: Option<usize> = None;
    for (i, c) in candidates.iter().enumerate() {
        if c.n_diverged == data.len() {
            continue;
        }
        if best.is_none_or(|b| c.median < candidates[b].median) {
            best = Some(i);
        }
    }
    let chosen = &candidates[best.unwrap_or(0)];
    let (q25, median, q75) = quartiles(&chosen.steady_state_means);
    Ok(GridResult {
        cell: SweepCell { method, mode, degree, hyperparam: chosen.hyperparam, median, q25, q75, n_diverged: chosen.n_diverged },
        candidates,
    })
}

pub fn grid_search(config: &ExperimentConfig, method: Method, mode: PreconditionMode, degree: usize) -> Result<GridResult> {
    config.validate()?;
    grid_search_with(config, &generate_trials(config)?, method, mode, degree)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub cells: Vec<SweepCell>,
}

impl SweepSummary {
    pub fn cell(&self, method: Method, mode: PreconditionMode, degree: usize) -> Option<&SweepCell> {
        self.cells.iter().find(|c| c.method == method && c.mode == mode && c.degree == degree)
    }

    /// Lowest-median cell for `method` over the given modes; ties go to the earlier cell.
    pub fn best(&self, method: Method, modes: &[PreconditionMode]) -> Option<&SweepCell> {
        self.cells
            .iter()
            .filter(|c| c.method == method && modes.contains(&c.mode))
            .fold(None, |acc: Option<&SweepCell>, c| match acc {
                Some(a) if a.median <= c.median => Some(a),
                _ => Some(c),
            })
    }
}

/// Method × mode × degree table at grid-optimal hyperparameters.
///
/// Mode `none` does not depend on the degree; it is evaluated once and the
/// result repeated on every degree row.
pub fn sweep_degrees(config: &ExperimentConfig) -> Result<SweepSummary> {
    config.validate()?;
    let data = generate_trials(config)?;
    sweep_degrees_with(config, &data)
}

pub fn sweep_degrees_with(config: &ExperimentConfig, data: &[TrialData]) -> Result<SweepSummary> {
    let mut cells = Vec::new();
    for &method in &config.methods {
        for &mode in &config.precondition_modes {
            if mode == PreconditionMode::None {
                let base = grid_search_with(config, data, method, mode, 0)?.cell;
                cells.extend(config.degrees().map(|degree| SweepCell { degree, ..base.clone() }));
                continue;
            }
            for degree in config.degrees() {
                cells.push(grid_search_with(config, data, method, mode, degree)?.cell);
            }
        }
    }
    Ok(SweepSummary { cells })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantiles_interpolate() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile_sorted(&v, 0.5), 2.5);
        assert_eq!(quantile_sorted(&v, 0.25), 1.75);
        assert_eq!(quantile_sorted(&[7.0], 0.75), 7.0);
        let inf = [1.0, f64::INFINITY, f64::INFINITY];
        assert_eq!(quantile_sorted(&inf, 0.5), f64::INFINITY);
        assert_eq!(quantile_sorted(&inf, 0.25), f64::INFINITY);
        assert_eq!(quantile_sorted(&[1.0, 3.0, f64::INFINITY], 0.5), 3.0);
    }

    fn tiny() -> ExperimentConfig {
        ExperimentConfig {
            hidden_dim: 4,
            horizon: 200,
            steady_window: 50,
            baseline_window: 4,
            trials: 3,
            degree_min: 0,
            degree_max: 3,
            lr_grid: vec![0.01, 1e-3],
            lambda_grid: vec![1.0, 0.1],
            ..ExperimentConfig::high_dim()
        }
    }

    #[test]
    fn single_value_grid_is_selected() {
        let c = ExperimentConfig { lambda_grid: vec![10.0], ..tiny() };
        let r = grid_search(&c, Method::Vaw, PreconditionMode::Learnable, 2).unwrap();
        assert_eq!(r.cell.hyperparam, 10.0);
        assert_eq!(r.candidates.len(), 1);
    }

    #[test]
    fn all_diverged_values_are_excluded() {
        let c = ExperimentConfig { lr_grid: vec![1e9, 1e-3], noise_sigma: 0.0, ..tiny() };
        let r = grid_search(&c, Method::Ogd, PreconditionMode::ChebyshevFixed, 3).unwrap();
        assert_eq!(r.candidates[1].hyperparam, 1e9);
        assert_eq!(r.candidates[1].n_diverged, c.trials);
        assert_eq!(r.cell.hyperparam, 1e-3);
    }

    #[test]
    fn selection_is_the_minimum_median() {
        let c = tiny();
        let r = grid_search(&c, Method::Vaw, PreconditionMode::Learnable, 2).unwrap();
        let min = r.candidates.iter().map(|c| c.median).fold(f64::INFINITY, f64::min);
        assert_eq!(r.cell.median, min);
        assert!(r.candidates.windows(2).all(|w| w[0].hyperparam < w[1].hyperparam));
    }

    #[test]
    fn sweep_shape_and_ordering() {
        let c = ExperimentConfig {
            precondition_modes: vec![PreconditionMode::None, PreconditionMode::ChebyshevFixed, PreconditionMode::Learnable],
            ..tiny()
        };
        let s = sweep_degrees(&c).unwrap();
        assert_eq!(s.cells.len(), 3 * 3 * 4);
        for cell in &s.cells {
            assert!(cell.q25 <= cell.median && cell.median <= cell.q75, "{cell:?}");
        }
        for m in [Method::Ogd, Method::Adam, Method::Vaw] {
            let a = s.cell(m, PreconditionMode::ChebyshevFixed, 0).unwrap();
            let b = s.cell(m, PreconditionMode::Learnable, 0).unwrap();
            assert_eq!((a.median, a.q25, a.q75), (b.median, b.q25, b.q75));
        }
        assert_eq!(s, sweep_degrees(&c).unwrap());
    }
}
