//! Monte-Carlo and grid verifiers for the complex-analytic Chebyshev bounds.
//!
//! Every verifier returns a [`BoundReport`] whose `worst_ratio` is the
//! largest observed `value / bound`; `pass` is `worst_ratio ≤ 1` (or the
//! stated tolerance).

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::eval::{eval_monic_real, ln_abs_monic_complex};
use super::exact::{chebyshev_table, MonicChebyshev};
use crate::error::{invalid, Result};
use crate::rng::{stream, Stream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub lemma: String,
    pub parameters: Value,
    pub samples: u64,
    pub worst_ratio: f64,
    pub pass: bool,
    /// Extra per-verifier diagnostics.
    #[serde(skip_serializing_if = "Value::is_null", default)]
    pub details: Value,
}

/// Checks `max_{x∈grid} |M_n(x)| ≤ 2^{1−n}(1 + 1e-9)` for `n ∈ [1, n_max]` on a uniform grid of `[−1, 1]`.
pub fn verify_flatness(n_max: usize, grid_points: usize) -> Result<BoundReport> {
    if n_max == 0 || grid_points < 2 {
        return Err(invalid("flatness check needs n_max ≥ 1 and at least two grid points"));
    }
    let mut worst = 0.0f64;
    for n in 1..=n_max {
        let bound = 2f64.powi(1 - n as i32);
        for i in 0..grid_points {
            let x = -1.0 + 2.0 * i as f64 / (grid_points - 1) as f64;
            worst = worst.max(eval_monic_real(n, x).abs() / bound);
        }
    }
    Ok(BoundReport {
        lemma: "monic_chebyshev_flatness".into(),
        parameters: json!({ "n_min": 1, "n_max": n_max, "grid_points": grid_points, "tolerance": 1e-9 }),
        samples: (n_max * grid_points) as u64,
        worst_ratio: worst,
        pass: worst <= 1.0 + 1e-9,
        details: Value::Null,
    })
}

/// Points in the sector `{|z| ≤ 1, |arg z| ≤ s}`. The first samples sit on the
/// corners and the outer arc where `|M_n|` is largest, then on the two radial
/// edges, then uniformly over the sector's area.
fn sector_samples<R: Rng>(rng: &mut R, s: f64, count: usize) -> Vec<Complex<f64>> {
    let mut pts = vec![Complex::from_polar(1.0, s), Complex::from_polar(1.0, -s), Complex::new(1.0, 0.0)];
    let arc = count / 4;
    let edges = count / 4;
    for _ in 0..arc {
        pts.push(Complex::from_polar(1.0, s * (2.0 * rng.random::<f64>() - 1.0)));
    }
    for i in 0..edges {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        pts.push(Complex::from_polar(rng.random::<f64>(), sign * s));
    }
    while pts.len() < count {
        let r = rng.random::<f64>().sqrt();
        pts.push(Complex::from_polar(r, s * (2.0 * rng.random::<f64>() - 1.0)));
    }
    pts.truncate(count.max(3));
    pts
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorDegreeResult {
    pub n: usize,
    pub worst_ratio: f64,
}

/// Sector bound `|M_n(z)| ≤ 2^{−pn}` for `|z| ≤ 1`, `|arg z| ≤ s`, `s ≤ ((1−p)/12)²`.
///
/// `samples` points are drawn independently for each degree.
pub fn verify_sector_bound(p: f64, s: f64, n_min: usize, n_max: usize, samples: usize, seed: u64) -> Result<BoundReport> {
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid(format!("decay constant p must lie in (0, 1), got {p}")));
    }
    let s_limit = ((1.0 - p) / 12.0).powi(2);
    if !(s >= 0.0 && s <= s_limit) {
        return Err(invalid(format!("sector half-angle {s} exceeds ((1-p)/12)^2 = {s_limit}")));
    }
    if n_min == 0 || n_max < n_min || samples == 0 {
        return Err(invalid("need 1 ≤ n_min ≤ n_max and samples ≥ 1"));
    }
    let mut rng = stream(seed, Stream::Verifier);
    let mut per_degree = Vec::with_capacity(n_max - n_min + 1);
    let mut total = 0u64;
    for n in n_min..=n_max {
        let pts = sector_samples(&mut rng, s, samples);
        total += pts.len() as u64;
        let ln_bound = -p * n as f64 * std::f64::consts::LN_2;
        let worst_ln = pts.iter().map(|&z| ln_abs_monic_complex(n, z) - ln_bound).fold(f64::NEG_INFINITY, f64::max);
        per_degree.push(SectorDegreeResult { n, worst_ratio: worst_ln.exp() });
    }
    let worst = per_degree.iter().map(|r| r.worst_ratio).fold(0.0, f64::max);
    // smallest n from which the bound holds for every tested larger degree
    let mut holds_from = None;
    for r in per_degree.iter().rev() {
        if r.worst_ratio <= 1.0 {
            holds_from = Some(r.n);
        } else {
            break;
        }
    }
    Ok(BoundReport {
        lemma: "sector_bound".into(),
        parameters: json!({ "p": p, "s": s, "n_min": n_min, "n_max": n_max, "samples_per_degree": samples, "seed": seed }),
        samples: total,
        worst_ratio: worst,
        pass: worst <= 1.0,
        details: json!({ "holds_from_n": holds_from, "per_degree": per_degree }),
    })
}

/// `|Im arccos z| ≤ 8√s` for `|z| ≤ 1`, `|arg z| ≤ s ≤ s_max < π/2`.
pub fn verify_im_arccos_bound(samples: usize, s_max: f64, seed: u64) -> Result<BoundReport> {
    if !(s_max > 0.0 && s_max < std::f64::consts::FRAC_PI_2) {
        return Err(invalid(format!("s_max must lie in (0, pi/2), got {s_max}")));
    }
    let mut rng = stream(seed, Stream::Verifier);
    let mut worst = 0.0f64;
    for i in 0..samples {
        let s = s_max * (1.0 - rng.random::<f64>()); // (0, s_max]
        let (r, theta) = match i % 3 {
            // boundary of the sector, where the bound is tightest
            0 => (1.0, if rng.random::<bool>() { s } else { -s }),
            1 => (1.0, s * (2.0 * rng.random::<f64>() - 1.0)),
            _ => (rng.random::<f64>().sqrt(), s * (2.0 * rng.random::<f64>() - 1.0)),
        };
        let z = Complex::from_polar(r, theta);
        worst = worst.max(z.acos().im.abs() / (8.0 * s.sqrt()));
    }
    Ok(BoundReport {
        lemma: "im_arccos_bound".into(),
        parameters: json!({ "s_max": s_max, "seed": seed }),
        samples: samples as u64,
        worst_ratio: worst,
        pass: worst <= 1.0,
        details: Value::Null,
    })
}

/// `|cos z| ≤ cosh t` whenever `|Im z| ≤ t ≤ t_max`.
pub fn verify_cos_cosh_bound(samples: usize, t_max: f64, seed: u64) -> Result<BoundReport> {
    if !(t_max >= 0.0) {
        return Err(invalid(format!("t_max must be non-negative, got {t_max}")));
    }
    let mut rng = stream(seed, Stream::Verifier);
    let mut worst = 0.0f64;
    let two_pi = 2.0 * std::f64::consts::PI;
    for i in 0..samples {
        let t = t_max * rng.random::<f64>();
        let x = two_pi * (2.0 * rng.random::<f64>() - 1.0);
        let y = if i % 2 == 0 { if rng.random::<bool>() { t } else { -t } } else { t * (2.0 * rng.random::<f64>() - 1.0) };
        let z = Complex::new(x, y);
        worst = worst.max(z.cos().norm() / t.cosh());
    }
    Ok(BoundReport {
        lemma: "cos_cosh_bound".into(),
        parameters: json!({ "t_max": t_max, "seed": seed, "tolerance": 1e-12 }),
        samples: samples as u64,
        worst_ratio: worst,
        pass: worst <= 1.0 + 1e-12,
        details: Value::Null,
    })
}

/// Exact check of `max_i |c_i(M_n)| ≤ 2^{0.3 n}` for `n ∈ [1, n_max]`.
pub fn verify_coefficient_bound(n_max: usize) -> BoundReport {
    let mut worst = 0.0f64;
    let mut pass = true;
    let mut rates = Vec::with_capacity(n_max);
    for m in MonicChebyshev::up_to(n_max).iter().skip(1) {
        pass &= m.max_c_at_most_pow2(3, 10);
        let rate = m.growth_rate();
        worst = worst.max(2f64.powf((rate - 0.3) * m.degree as f64));
        rates.push(json!([m.degree, rate]));
    }
    BoundReport {
        lemma: "monic_coefficient_magnitude".into(),
        parameters: json!({ "n_max": n_max, "exponent": 0.3 }),
        samples: n_max as u64,
        worst_ratio: worst,
        pass,
        details: json!({ "growth_rate_per_degree": rates }),
    }
}

/// Exact check of `max_i |c_i(M_n)| ≥ 2^{0.2 n}` for `n ∈ [n_min, n_max]`.
/// `worst_ratio` is the largest `2^{0.2n} / max_i |c_i|`.
pub fn verify_coefficient_lower_envelope(n_min: usize, n_max: usize) -> BoundReport {
    let mut worst = 0.0f64;
    let mut failing = Vec::new();
    for m in MonicChebyshev::up_to(n_max).iter().skip(n_min.max(1)) {
        if !m.max_c_at_least_pow2(1, 5) {
            failing.push(m.degree);
        }
        worst = worst.max(2f64.powf((0.2 - m.growth_rate()) * m.degree as f64));
    }
    BoundReport {
        lemma: "monic_coefficient_lower_envelope".into(),
        parameters: json!({ "n_min": n_min, "n_max": n_max, "exponent": 0.2 }),
        samples: (n_max + 1).saturating_sub(n_min.max(1)) as u64,
        worst_ratio: worst,
        pass: failing.is_empty(),
        details: json!({ "failing_degrees": failing }),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlatProbeReport {
    pub degree: usize,
    pub trials: usize,
    /// Minimum over trials of `max_j |d_j|`.
    pub min_max_coeff: BigRational,
    /// `max_j |d_j| ≥ 2^{n−1}` held in every trial.
    pub leading_floor_held: bool,
    /// `(k, log₂ max_i |c_i(M_k)| / k)` for `k = 1..=degree`.
    pub monic_growth: Vec<(usize, f64)>,
}

impl FlatProbeReport {
    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "trials": self.trials,
            "min_max_coeff": self.min_max_coeff.to_string(),
            "leading_floor_held": self.leading_floor_held,
            "monic_growth": self.monic_growth,
        })
    }
}

/// `max_j |d_j|` for `q = T_n + Σ_{k<n} lower[k] T_k = Σ_j d_j x^j`, where
/// `n = lower.len()` and `table` holds at least `T_0..T_n`.
pub fn flat_combination_max_coeff(table: &[Vec<BigInt>], lower: &[BigRational]) -> BigRational {
    let n = lower.len();
    let mut d: Vec<BigRational> = table[n].iter().map(|k| BigRational::from_integer(k.clone())).collect();
    for (c, t) in lower.iter().zip(table) {
        if c.is_zero() {
            continue;
        }
        for (j, tk) in t.iter().enumerate() {
            if !tk.is_zero() {
                d[j] += c * BigRational::from_integer(tk.clone());
            }
        }
    }
    d.iter().map(|x| x.abs()).max().expect("nonempty")
}

/// Draws `q = T_n + Σ_{k<n} c_k T_k` with `c_k` uniform in `[−2M, 2M]`,
/// expands each `q` exactly in the monomial basis, and records the smallest
/// largest-coefficient over the trials.
pub fn flat_poly_growth_probe(n: usize, m: f64, trials: usize, seed: u64) -> Result<FlatProbeReport> {
    if n < 2 {
        return Err(invalid("probe degree must be at least 2"));
    }
    if !(m > 0.0) {
        return Err(invalid(format!("M must be positive, got {m}")));
    }
    if trials == 0 {
        return Err(invalid("trials must be positive"));
    }
    let table = chebyshev_table(n);
    let mut rng = stream(seed, Stream::Probe);
    let floor = BigRational::from_integer(BigInt::one() << (n - 1));
    let mut min_max: Option<BigRational> = None;
    let mut floor_held = true;
    for _ in 0..trials {
        let lower: Vec<BigRational> = (0..n)
            .map(|_| BigRational::from_float(2.0 * m * (2.0 * rng.random::<f64>() - 1.0)).expect("finite draw"))
            .collect();
        let max = flat_combination_max_coeff(&table, &lower);
        floor_held &= max >= floor;
        min_max = Some(match min_max {
            Some(cur) if cur <= max => cur,
            _ => max,
        });
    }
    let monic_growth = MonicChebyshev::up_to(n).iter().skip(1).map(|m| (m.degree, m.growth_rate())).collect();
    Ok(FlatProbeReport {
        degree: n,
        trials,
        min_max_coeff: min_max.expect("trials > 0"),
        leading_floor_held: floor_held,
        monic_growth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flatness_small() {
        let r = verify_flatness(12, 2001).unwrap();
        assert!(r.pass);
        assert!((r.worst_ratio - 1.0).abs() < 1e-9);
    }

    #[test]
    fn sector_bound_rejects_wide_sector() {
        assert!(verify_sector_bound(0.5, 0.01, 20, 30, 10, 0).is_err());
    }

    #[test]
    fn sector_bound_on_real_interval() {
        let r = verify_sector_bound(0.9, 0.0, 2, 40, 200, 1).unwrap();
        assert!(!r.pass);
        assert_eq!(r.details["holds_from_n"], 10);
        let r = verify_sector_bound(0.9, 0.0, 10, 40, 200, 1).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn sector_direct_point() {
        // |M_4(1)| · 2^{0.5·4} = 2^{-3} · 4
        let v = eval_monic_real(4, 1.0f64).abs() * 2f64.powf(0.5 * 4.0);
        assert!((v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn im_arccos_special_cases() {
        assert_eq!(Complex::new(0.3f64, 0.0).acos().im.abs(), 0.0);
        let s = 0.01f64;
        assert!(Complex::from_polar(1.0, s).acos().im.abs() <= 0.8);
        assert!(verify_im_arccos_bound(10_000, 0.05, 3).unwrap().pass);
    }

    #[test]
    fn cos_cosh_equality_case() {
        let t = 1.7f64;
        let ratio = Complex::new(0.0, t).cos().norm() / t.cosh();
        assert!((ratio - 1.0).abs() < 1e-15);
        assert!(verify_cos_cosh_bound(10_000, 5.0, 2).unwrap().pass);
    }

    #[test]
    fn flat_probe_leading_floor() {
        let r = flat_poly_growth_probe(10, 1.0, 100, 4).unwrap();
        assert!(r.leading_floor_held);
        assert!(r.min_max_coeff >= BigRational::from_integer(BigInt::from(512)));
        assert!(flat_poly_growth_probe(10, 1.0, 0, 4).is_err());
    }

    #[test]
    fn flat_combination_without_perturbation() {
        let table = chebyshev_table(6);
        let zeros = |n| vec![BigRational::zero(); n];
        // T_4 = 8x^4 − 8x^2 + 1: the leading coefficient is the largest
        assert_eq!(flat_combination_max_coeff(&table, &zeros(4)), BigRational::from_integer(BigInt::from(8)));
        // T_6 = 32x^6 − 48x^4 + 18x^2 − 1: an interior coefficient dominates
        assert_eq!(flat_combination_max_coeff(&table, &zeros(6)), BigRational::from_integer(BigInt::from(48)));
    }

    #[test]
    fn coefficient_bound_report() {
        let r = verify_coefficient_bound(60);
        assert!(r.pass);
        assert!(r.worst_ratio <= 1.0);
    }
}
