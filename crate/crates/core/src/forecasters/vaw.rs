use crate::error::{invalid, Result, UspError};
use crate::linalg::Matrix;
use crate::scalar::{all_finite, dot, Real};

/// Steps between full re-factorizations of the curvature inverse.
pub const DEFAULT_REFRESH_INTERVAL: usize = 512;

/// Symmetry tolerance (relative to the largest entry) before a forced refresh.
const SYMMETRY_TOLERANCE: f64 = 1e-6;

/// Vovk-Azoury-Warmuth forecaster.
///
/// Keeps `A_t = λI + Σ a_s a_sᵀ`, its inverse (maintained with
/// Sherman-Morrison updates), and `v_t = Σ y_s a_s`. Each round is
/// [`predict`](Self::predict) followed by [`observe`](Self::observe) with the
/// same feature vector; `predict` folds the feature into the curvature first.
#[derive(Debug, Clone)]
pub struct VawForecaster<T> {
    dim: usize,
    lambda: T,
    curvature: Matrix<T>,
    curvature_inverse: Matrix<T>,
    target_accum: Vec<T>,
    step: usize,
    refresh_interval: usize,
    since_refresh: usize,
    refreshes: usize,
    scratch: Vec<T>,
}

impl<T: Real> VawForecaster<T> {
    pub fn new(dim: usize, lambda: T) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("VAW dimension must be at least 1"));
        }
        if !(lambda > T::zero()) || !lambda.is_finite() {
            return Err(invalid(format!("VAW regularization must be positive, got {lambda}")));
        }
        Ok(Self {
            dim,
            lambda,
            curvature: Matrix::scaled_identity(dim, lambda),
            curvature_inverse: Matrix::scaled_identity(dim, lambda.recip()),
            target_accum: vec![T::zero(); dim],
            step: 0,
            refresh_interval: DEFAULT_REFRESH_INTERVAL,
            since_refresh: 0,
            refreshes: 0,
            scratch: vec![T::zero(); dim],
        })
    }

    pub fn with_refresh_interval(mut self, interval: usize) -> Self {
        self.refresh_interval = interval.max(1);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn curvature(&self) -> &Matrix<T> {
        &self.curvature
    }

    pub fn curvature_inverse(&self) -> &Matrix<T> {
        &self.curvature_inverse
    }

    pub fn target_accum(&self) -> &[T] {
        &self.target_accum
    }

    /// Number of full re-factorizations performed so far.
    pub fn refreshes(&self) -> usize {
        self.refreshes
    }

    fn check_dim(&self, feature: &[T]) -> Result<()> {
        if feature.len() != self.dim {
            return Err(UspError::DimensionMismatch { expected: self.dim, found: feature.len() });
        }
        Ok(())
    }

    /// Adds `a aᵀ` to the curvature and returns `aᵀ A_t⁻¹ v_{t−1}`.
    pub fn predict(&mut self, feature: &[T]) -> Result<T> {
        self.check_dim(feature)?;
        if !all_finite(feature) {
            return Err(UspError::NonFinite("VAW feature"));
        }
        self.curvature.rank_one_update(T::one(), feature, feature);

        // P a, with P = A_{t-1}^{-1}
        for (i, k) in self.scratch.iter_mut().enumerate() {
            *k = dot(self.curvature_inverse.row(i), feature);
        }
        let denom = T::one() + dot(feature, &self.scratch);
        self.since_refresh += 1;
        let scale = self.curvature_inverse.max_abs();
        if !(denom >= T::one()) || !denom.is_finite() || self.since_refresh >= self.refresh_interval {
            self.refresh();
        } else {
            let k = std::mem::take(&mut self.scratch);
            self.curvature_inverse.rank_one_update(-denom.recip(), &k, &k);
            self.scratch = k;
            let diag_ok = (0..self.dim).all(|i| self.curvature_inverse[(i, i)] > T::zero());
            let sym_ok = self.curvature_inverse.max_asymmetry() <= T::lit(SYMMETRY_TOLERANCE) * scale;
            if !diag_ok || !sym_ok || !self.curvature_inverse.is_finite() {
                self.refresh();
            }
        }

        for (i, w) in self.scratch.iter_mut().enumerate() {
            *w = dot(self.curvature_inverse.row(i), &self.target_accum);
        }
        Ok(dot(feature, &self.scratch))
    }

    /// Adds `label · a` to the target vector.
    pub fn observe(&mut self, feature: &[T], label: T) -> Result<()> {
        self.check_dim(feature)?;
        if !label.is_finite() {
            return Err(UspError::NonFinite("VAW label"));
        }
        if label != T::zero() {
            for (v, &a) in self.target_accum.iter_mut().zip(feature) {
                *v += label * a;
            }
        }
        self.step += 1;
        Ok(())
    }

    /// Re-derives the inverse from the accumulated curvature matrix.
    pub fn refresh(&mut self) {
        self.since_refresh = 0;
        if let Ok(chol) = self.curvature.cholesky() {
            self.curvature_inverse = chol.inverse();
            self.refreshes += 1;
        }
    }

    /// Current ridge solution `A_t⁻¹ v_t`.
    pub fn weights(&self) -> Vec<T> {
        self.curvature_inverse.matvec(&self.target_accum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn init_state() {
        let v = VawForecaster::new(3, 2.0f64).unwrap();
        assert_eq!(v.curvature_inverse(), &Matrix::scaled_identity(3, 0.5));
        assert_eq!(v.target_accum(), &[0.0; 3]);
        assert_eq!(v.step(), 0);
        let s = VawForecaster::new(1, 1.0f64).unwrap();
        assert_eq!(s.curvature_inverse().as_slice(), &[1.0]);
        assert!(VawForecaster::new(2, 0.0f64).is_err());
        assert!(VawForecaster::new(2, -1.0f64).is_err());
        assert!(VawForecaster::new(0, 1.0f64).is_err());
    }

    #[test]
    fn first_prediction_is_zero() {
        let mut v = VawForecaster::new(4, 0.3f64).unwrap();
        assert_eq!(v.predict(&[1.0, -2.0, 3.0, 0.5]).unwrap(), 0.0);
    }

    #[test]
    fn scalar_trace() {
        let mut v = VawForecaster::new(1, 1.0f64).unwrap();
        assert_eq!(v.predict(&[1.0]).unwrap(), 0.0);
        v.observe(&[1.0], 1.0).unwrap();
        assert_eq!(v.target_accum(), &[1.0]);
        let p = v.predict(&[1.0]).unwrap();
        assert!((p - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(v.curvature().as_slice(), &[3.0]);
    }

    #[test]
    fn orthogonal_feature_predicts_zero() {
        let mut v = VawForecaster::new(2, 1.0f64).unwrap();
        v.predict(&[1.0, 0.0]).unwrap();
        v.observe(&[1.0, 0.0], 2.0).unwrap();
        assert_eq!(v.predict(&[0.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn observe_linearity() {
        let mut v = VawForecaster::new(2, 1.0f64).unwrap();
        v.observe(&[1.0, 2.0], 0.0).unwrap();
        assert_eq!(v.target_accum(), &[0.0, 0.0]);
        v.observe(&[1.0, 2.0], 3.0).unwrap();
        v.observe(&[1.0, 2.0], -3.0).unwrap();
        assert_eq!(v.target_accum(), &[0.0, 0.0]);
    }

    #[test]
    fn rejects_non_finite_and_mismatched_inputs() {
        let mut v = VawForecaster::new(2, 1.0f64).unwrap();
        assert_eq!(v.predict(&[f64::NAN, 0.0]).unwrap_err(), UspError::NonFinite("VAW feature"));
        assert!(v.observe(&[1.0, 0.0], f64::INFINITY).is_err());
        assert!(v.predict(&[1.0]).is_err());
    }

    #[test]
    fn inverse_tracks_curvature() {
        let mut v = VawForecaster::new(3, 0.5f64).unwrap().with_refresh_interval(1_000_000);
        let feats = [[1.0, 0.5, -0.2], [0.3, -1.0, 2.0], [0.0, 0.7, 0.1], [1.5, 1.5, 1.5]];
        let mut direct = Matrix::scaled_identity(3, 0.5);
        for (i, a) in feats.iter().enumerate() {
            v.predict(a).unwrap();
            v.observe(a, i as f64).unwrap();
            direct.rank_one_update(1.0, a, a);
        }
        let prod = direct.matmul(v.curvature_inverse());
        for i in 0..3 {
            for j in 0..3 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((prod[(i, j)] - e).abs() < 1e-10);
            }
        }
        assert_eq!(v.refreshes(), 0);
    }

    #[test]
    fn periodic_refresh_happens() {
        let mut v = VawForecaster::new(2, 1.0f64).unwrap().with_refresh_interval(4);
        for t in 0..9 {
            let a = [t as f64, 1.0];
            v.predict(&a).unwrap();
            v.observe(&a, 1.0).unwrap();
        }
        assert_eq!(v.refreshes(), 2);
    }
}
