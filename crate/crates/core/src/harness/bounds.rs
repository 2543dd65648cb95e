use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::chebyshev::{
    flat_poly_growth_probe, verify_coefficient_bound, verify_coefficient_lower_envelope, verify_cos_cosh_bound,
    verify_flatness, verify_im_arccos_bound, verify_sector_bound, BoundReport,
};
use crate::error::Result;

/// Parameters for the full battery of Chebyshev checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundsConfig {
    pub flatness_n_max: usize,
    pub flatness_grid: usize,
    pub sector_p: f64,
    pub sector_s: f64,
    pub sector_n_min: usize,
    pub sector_n_max: usize,
    pub sector_samples: usize,
    pub cos_cosh_samples: usize,
    pub cos_cosh_t_max: f64,
    pub im_arccos_samples: usize,
    pub im_arccos_s_max: f64,
    pub coefficient_n_max: usize,
    pub envelope_n_min: usize,
    pub probe_degree_min: usize,
    pub probe_degree_max: usize,
    pub probe_m: f64,
    pub probe_trials: usize,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        Self {
            flatness_n_max: 40,
            flatness_grid: 10_001,
            sector_p: 0.5,
            sector_s: 1.0 / 576.0,
            sector_n_min: 20,
            sector_n_max: 200,
            sector_samples: 10_000,
            cos_cosh_samples: 100_000,
            cos_cosh_t_max: 5.0,
            im_arccos_samples: 100_000,
            im_arccos_s_max: 0.05,
            coefficient_n_max: 200,
            envelope_n_min: 20,
            probe_degree_min: 4,
            probe_degree_max: 16,
            probe_m: 1.0,
            probe_trials: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsSummary {
    pub seed: u64,
    pub reports: Vec<BoundReport>,
    pub flat_probes: Vec<Value>,
}

impl BoundsSummary {
    pub fn report(&self, lemma: &str) -> Option<&BoundReport> {
        self.reports.iter().find(|r| r.lemma == lemma)
    }
}

pub fn run_bound_checks(config: &BoundsConfig, seed: u64) -> Result<BoundsSummary> {
    let reports = vec![
        verify_flatness(config.flatness_n_max, config.flatness_grid)?,
        verify_sector_bound(config.sector_p, config.sector_s, config.sector_n_min, config.sector_n_max, config.sector_samples, seed)?,
        verify_cos_cosh_bound(config.cos_cosh_samples, config.cos_cosh_t_max, seed)?,
        verify_im_arccos_bound(config.im_arccos_samples, config.im_arccos_s_max, seed)?,
        verify_coefficient_bound(config.coefficient_n_max),
        verify_coefficient_lower_envelope(config.envelope_n_min, config.coefficient_n_max),
    ];
    let flat_probes = (config.probe_degree_min..=config.probe_degree_max)
        .map(|n| flat_poly_growth_probe(n, config.probe_m, config.probe_trials, seed.wrapping_add(n as u64)).map(|r| r.to_json()))
        .collect::<Result<_>>()?;
    Ok(BoundsSummary { seed, reports, flat_probes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_battery_runs() {
        let c = BoundsConfig {
            flatness_n_max: 5,
            flatness_grid: 101,
            sector_n_max: 30,
            sector_samples: 50,
            cos_cosh_samples: 100,
            im_arccos_samples: 100,
            coefficient_n_max: 30,
            probe_degree_max: 5,
            probe_trials: 3,
            ..BoundsConfig::default()
        };
        let s = run_bound_checks(&c, 1).unwrap();
        assert_eq!(s.reports.len(), 6);
        assert_eq!(s.flat_probes.len(), 2);
        assert!(s.report("sector_bound").is_some());
        assert_eq!(s, run_bound_checks(&c, 1).unwrap());
    }
}
