//! Universal sequence preconditioning: feature vectors, Chebyshev-filtered
//! labels, the fixed benchmark predictor `x*`, and the residual it leaves.
//!
//! Sequences are 1-based in the formulas and stored 0-based: `y[t-1]` is
//! `y_t`. Any index `≤ 0` reads as zero, matching the zero initial state.

use serde::{Deserialize, Serialize};

use crate::chebyshev::MonicChebyshev;
use crate::error::{invalid, Result, UspError};
use crate::lds::{impulse_response, LdsSystem};
use crate::linalg::Matrix;
use crate::scalar::{dot, norm_sq, Real};

/// Degree cap for floating-point paths; coefficients grow like `2^{0.3n}`.
pub const MAX_DEGREE: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PreconditionMode {
    /// Raw labels, lag window `w` on both `y` and `u`.
    None,
    /// Chebyshev-filtered labels, lag window `n` on `u` only.
    ChebyshevFixed,
    /// Raw labels, lag window `n` on both `y` and `u` (filter learned implicitly).
    Learnable,
    /// Differenced labels, lag window `n` on `u` only.
    Differencing,
}

impl PreconditionMode {
    pub fn name(self) -> &'static str {
        match self {
            Self::None => "none",
            Self::ChebyshevFixed => "chebyshev_fixed",
            Self::Learnable => "learnable",
            Self::Differencing => "differencing",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreconditionConfig {
    pub degree: usize,
    pub mode: PreconditionMode,
    pub baseline_window: usize,
}

impl PreconditionConfig {
    pub fn new(degree: usize, mode: PreconditionMode, baseline_window: usize) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(invalid(format!("degree {degree} exceeds the supported maximum {MAX_DEGREE}")));
        }
        if baseline_window == 0 {
            return Err(invalid("baseline window must be at least 1"));
        }
        Ok(Self { degree, mode, baseline_window })
    }

    /// Length of the online feature vector this configuration produces.
    pub fn feature_dim(&self) -> usize {
        match self.mode {
            PreconditionMode::None => 2 * self.baseline_window,
            PreconditionMode::Learnable => 2 * self.degree,
            PreconditionMode::ChebyshevFixed | PreconditionMode::Differencing => self.degree,
        }
    }
}

#[inline]
fn at<T: Real>(seq: &[T], t: isize) -> T {
    if t >= 1 {
        seq.get(t as usize - 1).copied().unwrap_or_else(T::zero)
    } else {
        T::zero()
    }
}

/// `[y_{t−1}, …, y_{t−n}, u_t, …, u_{t−n+1}]`.
pub fn build_feature_vector<T: Real>(y_hist: &[T], u_hist: &[T], t: usize, n: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(2 * n);
    push_output_lags(&mut out, y_hist, t, n);
    push_input_lags(&mut out, u_hist, t, n);
    out
}

/// Appends `y_{t−1}, …, y_{t−n}`.
pub fn push_output_lags<T: Real>(out: &mut Vec<T>, y_hist: &[T], t: usize, n: usize) {
    let t = t as isize;
    out.extend((1..=n as isize).map(|i| at(y_hist, t - i)));
}

/// Appends `u_t, …, u_{t−n+1}`.
pub fn push_input_lags<T: Real>(out: &mut Vec<T>, u_hist: &[T], t: usize, n: usize) {
    let t = t as isize;
    out.extend((0..n as isize).map(|i| at(u_hist, t - i)));
}

/// Floating-point view of the monic Chebyshev coefficients `c_0 = 1, c_1, …, c_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Preconditioner<T> {
    coefficients: Vec<T>,
}

impl<T: Real> Preconditioner<T> {
    pub fn chebyshev(n: usize) -> Self {
        Self::from_monic(&MonicChebyshev::new(n))
    }

    pub fn from_monic(cheby: &MonicChebyshev) -> Self {
        Self { coefficients: cheby.c_values() }
    }

    /// `y_t − y_{t−1}`, i.e. the monic polynomial `x − 1`.
    pub fn differencing() -> Self {
        Self { coefficients: vec![T::one(), -T::one()] }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// `[c_0, …, c_n]`.
    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    /// `Σ_{i=1}^n c_i y_{t−i}`.
    pub fn history_term(&self, y_hist: &[T], t: usize) -> T {
        let t = t as isize;
        self.coefficients.iter().enumerate().skip(1).map(|(i, &c)| c * at(y_hist, t - i as isize)).sum()
    }

    /// `ỹ_t = y_t + Σ_{i=1}^n c_i y_{t−i}`.
    pub fn target(&self, y_hist: &[T], t: usize) -> T {
        at(y_hist, t as isize) + self.history_term(y_hist, t)
    }

    /// `ỹ_1, …, ỹ_T`.
    pub fn apply(&self, y: &[T]) -> Vec<T> {
        (1..=y.len()).map(|t| self.target(y, t)).collect()
    }
}

pub fn preconditioned_target<T: Real>(y_hist: &[T], t: usize, cheby: &MonicChebyshev) -> T {
    Preconditioner::from_monic(cheby).target(y_hist, t)
}

/// `y_t − y_{t−1}` with `y_0 = 0`.
pub fn difference_signal<T: Real>(y: &[T]) -> Vec<T> {
    let mut prev = T::zero();
    y.iter()
        .map(|&v| {
            let d = v - prev;
            prev = v;
            d
        })
        .collect()
}

/// `θ^USP_s = Σ_{i=0}^s c_i C A^{s−i} B` for `s = 0..n`.
pub fn usp_theta<T: Real>(system: &LdsSystem<T>, n: usize) -> Result<Vec<T>> {
    if n == 0 {
        return Err(invalid("USP degree must be at least 1"));
    }
    let c: Vec<T> = MonicChebyshev::new(n).c_values();
    Ok(theta_from_parts(&c, &impulse_response(system, n)))
}

fn theta_from_parts<T: Real>(c: &[T], theta: &[T]) -> Vec<T> {
    (0..theta.len()).map(|s| (0..=s).map(|i| c[i] * theta[s - i]).sum()).collect()
}

#[derive(Debug, Clone)]
pub struct UspBenchmark<T> {
    /// `[−c_1, …, −c_n, θ^USP_0, …, θ^USP_{n−1}]`
    pub vector: Vec<T>,
    pub theta_usp: Vec<T>,
    pub cheby: MonicChebyshev,
    pub norm_sq: T,
}

impl<T: Real> UspBenchmark<T> {
    pub fn degree(&self) -> usize {
        self.cheby.degree
    }

    /// `n³ κ² ‖C‖² ‖B‖² 2^{0.6 n}`.
    pub fn norm_sq_bound(system: &LdsSystem<T>, n: usize) -> T {
        let nf = T::count(n);
        let kappa = system.diag_condition;
        nf * nf * nf * kappa * kappa * norm_sq(&system.output_map) * norm_sq(&system.input_map) * T::lit(2.0).powf(T::lit(0.6) * nf)
    }
}

/// Assembles the fixed comparator `x*` for the degree-`n` Chebyshev filter.
pub fn usp_benchmark<T: Real>(system: &LdsSystem<T>, n: usize) -> Result<UspBenchmark<T>> {
    if n == 0 {
        return Err(invalid("USP degree must be at least 1"));
    }
    let cheby = MonicChebyshev::new(n);
    let c: Vec<T> = cheby.c_values();
    let theta_usp = theta_from_parts(&c, &impulse_response(system, n));
    let mut vector: Vec<T> = c[1..].iter().map(|&ci| -ci).collect();
    vector.extend_from_slice(&theta_usp);
    let norm_sq = norm_sq(&vector);
    let bound = UspBenchmark::norm_sq_bound(system, n);
    if !(norm_sq <= bound * (T::one() + T::lit(1e-12))) {
        return Err(UspError::InvariantViolation(format!("‖x*‖² = {norm_sq} exceeds the bound {bound}")));
    }
    Ok(UspBenchmark { vector, theta_usp, cheby, norm_sq })
}

/// `p(A) = Σ_i c_i A^{n−i}` by Horner's rule in `A`.
pub fn matrix_polynomial<T: Real>(a: &Matrix<T>, coefficients: &[T]) -> Matrix<T> {
    let d = a.rows();
    let mut acc = Matrix::scaled_identity(d, coefficients[0]);
    for &c in &coefficients[1..] {
        acc = acc.matmul(a);
        acc.add_scaled_identity(c);
    }
    acc
}

/// Row vector `C p_n(A)`.
fn filtered_output_map<T: Real>(system: &LdsSystem<T>, n: usize) -> Vec<T> {
    let c: Vec<T> = MonicChebyshev::new(n).c_values();
    matrix_polynomial(&system.transition, &c).vecmat(&system.output_map)
}

/// Residual `ε_t = Σ_{s≥0} C p_n(A) Aˢ B u_{t−n−s}` of the benchmark at time `t`.
///
/// The sum equals `C p_n(A) h_{t−n}`, so the state is rolled forward to
/// `t − n` and the filter applied once. Zero for `t ≤ n`.
pub fn residual_epsilon<T: Real>(system: &LdsSystem<T>, inputs: &[T], t: usize, n: usize) -> T {
    if t <= n {
        return T::zero();
    }
    let states = system.states(&inputs[..(t - n).min(inputs.len())]);
    let h = states.last().expect("t > n ≥ 0 gives at least one state");
    dot(&filtered_output_map(system, n), h)
}

/// `ε_1, …, ε_T` in a single pass.
pub fn residual_series<T: Real>(system: &LdsSystem<T>, inputs: &[T], n: usize) -> Vec<T> {
    let w = filtered_output_map(system, n);
    let states = system.states(inputs);
    (1..=inputs.len()).map(|t| if t <= n { T::zero() } else { dot(&w, &states[t - n - 1]) }).collect()
}

/// `|ε_t|` ceiling: `‖C‖‖B‖ κ T · max_{λ ∈ spec(A)} |M_n(λ)|`.
pub fn residual_bound<T: Real>(system: &LdsSystem<T>, horizon: usize, n: usize) -> T {
    let worst = system
        .eigenvalues
        .iter()
        .map(|&z| crate::chebyshev::eval_monic_complex(n, z).norm())
        .fold(T::zero(), T::max);
    system.output_norm() * system.input_norm() * system.diag_condition * T::count(horizon) * worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lds::{gen_inputs_decaying, generate_system, generate_system_with, simulate, SpectrumBound};

    #[test]
    fn feature_vector_layout() {
        assert_eq!(build_feature_vector(&[9.0], &[4.0], 1, 3), vec![0.0, 0.0, 0.0, 4.0, 0.0, 0.0]);
        let y = [5.0, 7.0, 100.0];
        let u = [1.0, 2.0, 3.0];
        assert_eq!(build_feature_vector(&y, &u, 3, 2), vec![7.0, 5.0, 3.0, 2.0]);
        assert!(build_feature_vector(&y, &u, 3, 0).is_empty());
    }

    #[test]
    fn feature_norm_bound() {
        let y: Vec<f64> = (0..50).map(|i| ((i * 7) % 11) as f64 / 11.0 * 3.0 - 1.5).collect();
        let u: Vec<f64> = (0..50).map(|i| ((i * 5) % 13) as f64 / 13.0 * 2.0 - 1.0).collect();
        let ymax = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for t in 1..=50 {
            let a = build_feature_vector(&y, &u, t, 6);
            assert!(norm_sq(&a) <= 6.0 * (ymax * ymax + 1.0));
        }
    }

    #[test]
    fn preconditioned_targets() {
        let y = [3.0, 2.0, 4.0, 1.0];
        let m0 = MonicChebyshev::new(0);
        assert_eq!(preconditioned_target(&y, 4, &m0), 1.0);
        let m1 = MonicChebyshev::new(1);
        assert_eq!(preconditioned_target(&y, 4, &m1), 1.0);
        // y_{t-2} = 2, y_t = 1 → 1 + 0·4 − ½·2 = 0
        let y = [2.0, 4.0, 1.0];
        assert_eq!(preconditioned_target(&y, 3, &MonicChebyshev::new(2)), 0.0);
    }

    #[test]
    fn differencing() {
        assert_eq!(difference_signal(&[4.0, 4.0, 4.0]), vec![4.0, 0.0, 0.0]);
        assert_eq!(difference_signal(&[1.0, 2.0, 3.0]), vec![1.0, 1.0, 1.0]);
        assert_eq!(Preconditioner::<f64>::differencing().apply(&[1.0, 2.0, 3.0]), vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn theta_for_nilpotent_system() {
        let sys = LdsSystem::scalar(0.0, 2.0, 1.5);
        let n = 6;
        let th = usp_theta(&sys, n).unwrap();
        let c: Vec<f64> = MonicChebyshev::new(n).c_values();
        for s in 0..n {
            assert_eq!(th[s], c[s] * 3.0);
        }
        assert_eq!(usp_theta(&sys, 1).unwrap(), vec![3.0]);
    }

    #[test]
    fn theta_matches_brute_force() {
        let sys = generate_system::<f64>(6, 0.02, 0.2, 13).unwrap();
        let n = 8;
        let c: Vec<f64> = MonicChebyshev::new(n).c_values();
        let th = usp_theta(&sys, n).unwrap();
        for s in 0..n {
            let brute: f64 = (0..=s)
                .map(|i| c[i] * dot(&sys.output_map, &sys.transition.pow(s - i).matvec(&sys.input_map)))
                .sum();
            assert!((th[s] - brute).abs() <= 1e-10 * brute.abs().max(1.0));
        }
    }

    #[test]
    fn scalar_benchmark() {
        let sys = LdsSystem::scalar(0.7, 1.0, 1.0);
        let b = usp_benchmark(&sys, 1).unwrap();
        assert_eq!(b.vector, vec![0.0, 1.0]);
        assert_eq!(b.norm_sq, 1.0);
    }

    #[test]
    fn benchmark_prefix_is_negated_chebyshev() {
        let sys = generate_system::<f64>(10, 1e-3, 0.1, 2).unwrap();
        let b = usp_benchmark(&sys, 12).unwrap();
        let c: Vec<f64> = b.cheby.c_values();
        for i in 1..=12 {
            assert_eq!(b.vector[i - 1], -c[i]);
        }
    }

    #[test]
    fn residual_zero_before_degree() {
        let sys = generate_system::<f64>(4, 0.0, 0.1, 1).unwrap();
        let u = gen_inputs_decaying::<f64>(20, 1);
        for t in 1..=5 {
            assert_eq!(residual_epsilon(&sys, &u, t, 5), 0.0);
        }
    }

    #[test]
    fn realizability_identity() {
        let sys = generate_system::<f64>(8, 1e-4, 0.1, 17).unwrap();
        let u = gen_inputs_decaying::<f64>(400, 17);
        let y = simulate(&sys, &u, 0.0, 0).unwrap().outputs;
        for n in [1, 5, 12] {
            let b = usp_benchmark(&sys, n).unwrap();
            let eps = residual_series(&sys, &u, n);
            for t in 1..=u.len() {
                let a = build_feature_vector(&y, &u, t, n);
                let lhs = y[t - 1] - dot(&b.vector, &a);
                assert!((lhs - eps[t - 1]).abs() <= 1e-8 * (y[t - 1].abs() + 1e-8), "n={n} t={t}");
            }
            assert!((residual_epsilon(&sys, &u, 250, n) - eps[249]).abs() < 1e-12);
        }
    }

    #[test]
    fn label_preconditioning_equals_benchmark_ar_part() {
        let y: Vec<f64> = (1..=30).map(|t| (t as f64 * 0.37).sin() * t as f64).collect();
        let n = 7;
        let p = Preconditioner::<f64>::chebyshev(n);
        let b = usp_benchmark(&LdsSystem::scalar(0.5, 1.0, 1.0), n).unwrap();
        for t in 1..=30 {
            let a = build_feature_vector(&y, &y, t, n);
            let ar: f64 = dot(&b.vector[..n], &a[..n]);
            assert_eq!(p.target(&y, t), y[t - 1] - ar);
        }
    }

    #[test]
    fn residual_respects_interval_bound() {
        // real spectrum inside [-1, 1]
        let sys = generate_system::<f64>(10, 0.0, 0.0, 3).unwrap();
        let u = gen_inputs_decaying::<f64>(1000, 3);
        let n = 25;
        let cap = sys.output_norm() * sys.input_norm() * sys.diag_condition * 1000.0 * 2f64.powi(1 - n as i32);
        for e in residual_series(&sys, &u, n) {
            assert!(e.abs() <= cap);
        }
    }

    #[test]
    fn residual_respects_sector_bound() {
        let sys = generate_system_with::<f64>(10, 0.0, SpectrumBound::Arg(1.0 / 576.0), 8).unwrap();
        let u = gen_inputs_decaying::<f64>(1000, 8);
        let n = 30;
        let cap = sys.output_norm() * sys.input_norm() * sys.diag_condition * 1000.0 * 2f64.powi(-15);
        let spectral = residual_bound(&sys, 1000, n);
        for e in residual_series(&sys, &u, n) {
            assert!(e.abs() <= cap);
            assert!(e.abs() <= spectral * (1.0 + 1e-9));
        }
    }

    #[test]
    fn config_validation() {
        assert!(PreconditionConfig::new(65, PreconditionMode::Learnable, 10).is_err());
        assert!(PreconditionConfig::new(5, PreconditionMode::None, 0).is_err());
        let c = PreconditionConfig::new(5, PreconditionMode::ChebyshevFixed, 10).unwrap();
        assert_eq!(c.feature_dim(), 5);
    }
}
