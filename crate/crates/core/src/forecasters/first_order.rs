use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, UspError};
use crate::scalar::{all_finite, dot, Real};

pub const ADAM_BETA1: f64 = 0.9;
pub const ADAM_BETA2: f64 = 0.999;
pub const ADAM_EPSILON: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizerKind {
    Ogd,
    Adam,
}

#[derive(Debug, Clone)]
struct AdamMoments<T> {
    first: Vec<T>,
    second: Vec<T>,
    step: i32,
}

/// Online gradient descent or Adam on the squared loss `½(wᵀa − y)²`,
/// with a constant learning rate and no projection.
#[derive(Debug, Clone)]
pub struct FirstOrderState<T> {
    weights: Vec<T>,
    learning_rate: T,
    kind: OptimizerKind,
    adam: Option<AdamMoments<T>>,
    diverged: bool,
}

impl<T: Real> FirstOrderState<T> {
    pub fn new(kind: OptimizerKind, dim: usize, learning_rate: T) -> Result<Self> {
        if !(learning_rate > T::zero()) || !learning_rate.is_finite() {
            return Err(invalid(format!("learning rate must be positive, got {learning_rate}")));
        }
        let adam = (kind == OptimizerKind::Adam)
            .then(|| AdamMoments { first: vec![T::zero(); dim], second: vec![T::zero(); dim], step: 0 });
        Ok(Self { weights: vec![T::zero(); dim], learning_rate, kind, adam, diverged: false })
    }

    pub fn with_weights(mut self, weights: Vec<T>) -> Result<Self> {
        if weights.len() != self.weights.len() {
            return Err(UspError::DimensionMismatch { expected: self.weights.len(), found: weights.len() });
        }
        self.weights = weights;
        Ok(self)
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn kind(&self) -> OptimizerKind {
        self.kind
    }

    pub fn is_diverged(&self) -> bool {
        self.diverged
    }

    /// Predicts `wᵀa` with the current weights, then takes one gradient step.
    ///
    /// Once the weights stop being finite the state is frozen and every
    /// subsequent call returns `Err(StepError::Diverged)`.
    pub fn step(&mut self, feature: &[T], label: T) -> Result<T, StepError> {
        if feature.len() != self.weights.len() {
            return Err(StepError::Input(UspError::DimensionMismatch { expected: self.weights.len(), found: feature.len() }));
        }
        if self.diverged {
            return Err(StepError::Diverged);
        }
        let prediction = dot(&self.weights, feature);
        let residual = prediction - label;
        if !prediction.is_finite() || !residual.is_finite() {
            self.diverged = true;
            return Err(StepError::Diverged);
        }
        let eta = self.learning_rate;
        match self.adam.as_mut() {
            None => {
                for (w, &a) in self.weights.iter_mut().zip(feature) {
                    *w -= eta * residual * a;
                }
            }
            Some(m) => {
                let (b1, b2) = (T::lit(ADAM_BETA1), T::lit(ADAM_BETA2));
                m.step += 1;
                let c1 = T::one() - b1.powi(m.step);
                let c2 = T::one() - b2.powi(m.step);
                for (((w, &a), g1), g2) in self.weights.iter_mut().zip(feature).zip(&mut m.first).zip(&mut m.second) {
                    let g = residual * a;
                    *g1 = b1 * *g1 + (T::one() - b1) * g;
                    *g2 = b2 * *g2 + (T::one() - b2) * g * g;
                    let m_hat = *g1 / c1;
                    let v_hat = *g2 / c2;
                    *w -= eta * m_hat / (v_hat.sqrt() + T::lit(ADAM_EPSILON));
                }
            }
        }
        if !all_finite(&self.weights) {
            self.diverged = true;
            return Err(StepError::Diverged);
        }
        Ok(prediction)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StepError {
    /// Malformed input; the state is unchanged.
    Input(UspError),
    /// Terminal: some weight or prediction became non-finite.
    Diverged,
}

impl std::fmt::Display for StepError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StepError::Input(e) => write!(f, "{e}"),
            StepError::Diverged => f.write_str("first-order weights diverged"),
        }
    }
}

impl std::error::Error for StepError {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_feature_leaves_weights() {
        for kind in [OptimizerKind::Ogd, OptimizerKind::Adam] {
            let mut s = FirstOrderState::new(kind, 2, 0.1f64).unwrap().with_weights(vec![0.5, -1.0]).unwrap();
            let p = s.step(&[0.0, 0.0], 3.0).unwrap();
            assert_eq!(p, 0.0);
            assert_eq!(s.weights(), &[0.5, -1.0]);
        }
    }

    #[test]
    fn single_ogd_step() {
        let mut s = FirstOrderState::new(OptimizerKind::Ogd, 1, 0.1f64).unwrap();
        assert_eq!(s.step(&[1.0], 1.0).unwrap(), 0.0);
        assert!((s.weights()[0] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn adam_first_step_is_unit_sign_step() {
        for (a, y) in [(2.0, 1.0), (-0.3, 5.0), (1.0, -4.0)] {
            let mut s = FirstOrderState::new(OptimizerKind::Adam, 1, 0.01f64).unwrap();
            s.step(&[a], y).unwrap();
            let g: f64 = (0.0 - y) * a;
            let w = s.weights()[0];
            assert!((w.abs() - 0.01).abs() < 1e-8, "{w}");
            assert_eq!(w.signum(), -g.signum());
        }
    }

    #[test]
    fn divergence_is_terminal() {
        let mut s = FirstOrderState::new(OptimizerKind::Ogd, 1, 0.1f64).unwrap();
        let mut hit = None;
        for t in 0..2000 {
            match s.step(&[1e30], 1.0) {
                Ok(p) => assert!(p.is_finite()),
                Err(StepError::Diverged) => {
                    hit = Some(t);
                    break;
                }
                Err(e) => panic!("{e}"),
            }
        }
        assert!(hit.is_some());
        assert!(s.is_diverged());
        assert_eq!(s.step(&[1.0], 1.0), Err(StepError::Diverged));
    }

    #[test]
    fn rejects_bad_learning_rate() {
        assert!(FirstOrderState::new(OptimizerKind::Ogd, 1, 0.0f64).is_err());
    }
}
