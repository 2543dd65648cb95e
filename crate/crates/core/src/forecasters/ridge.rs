use crate::error::{invalid, Result, UspError};
use crate::linalg::Matrix;
use crate::scalar::Real;

/// Offline ridge solution: minimizer of `Σ ½(xᵀa_t − y_t)² + (λ/2)‖x‖²`.
pub fn ridge_comparator<T: Real>(features: &[Vec<T>], labels: &[T], lambda: T) -> Result<Vec<T>> {
    if features.is_empty() {
        return Err(invalid("ridge comparator needs at least one sample"));
    }
    if features.len() != labels.len() {
        return Err(UspError::DimensionMismatch { expected: features.len(), found: labels.len() });
    }
    if !(lambda > T::zero()) {
        return Err(invalid(format!("ridge regularization must be positive, got {lambda}")));
    }
    let dim = features[0].len();
    let mut gram = Matrix::scaled_identity(dim, lambda);
    let mut rhs = vec![T::zero(); dim];
    for (a, &y) in features.iter().zip(labels) {
        if a.len() != dim {
            return Err(UspError::DimensionMismatch { expected: dim, found: a.len() });
        }
        gram.rank_one_update(T::one(), a, a);
        for (r, &ai) in rhs.iter_mut().zip(a) {
            *r += y * ai;
        }
    }
    Ok(gram.cholesky()?.solve(&rhs))
}

/// Comparator-independent part of the VAW regret bound:
/// `½ + (Y²/2)·n·ln(1 + T‖x*‖²R²/n)`.
pub fn vaw_regret_bound<T: Real>(label_bound: T, feature_bound: T, n_dim: usize, horizon: usize, comparator_norm: T) -> T {
    let n = T::count(n_dim);
    let t = T::count(horizon);
    let half = T::lit(0.5);
    let growth = t * comparator_norm * comparator_norm * feature_bound * feature_bound / n;
    half + half * label_bound * label_bound * n * growth.ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_labels_give_zero_solution() {
        let feats = vec![vec![1.0, 2.0], vec![-1.0, 0.5]];
        assert_eq!(ridge_comparator(&feats, &[0.0, 0.0], 1.0f64).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn scalar_closed_form() {
        let (c, t, lambda) = (2.5f64, 40usize, 3.0f64);
        let feats = vec![vec![1.0]; t];
        let labels = vec![c; t];
        let x = ridge_comparator(&feats, &labels, lambda).unwrap();
        assert!((x[0] - c * t as f64 / (t as f64 + lambda)).abs() < 1e-13);
    }

    #[test]
    fn shrinks_with_regularization() {
        let feats = vec![vec![1.0f64, 0.3], vec![0.2, -1.0], vec![0.5, 0.5]];
        let labels = [1.0, -2.0, 0.7];
        let mut prev = f64::INFINITY;
        for lambda in [0.01, 0.1, 1.0, 10.0, 100.0, 1000.0] {
            let x = ridge_comparator(&feats, &labels, lambda).unwrap();
            let n = (x[0] * x[0] + x[1] * x[1]).sqrt();
            assert!(n < prev);
            prev = n;
        }
    }

    #[test]
    fn rejects_empty_and_mismatched() {
        assert!(ridge_comparator::<f64>(&[], &[], 1.0).is_err());
        assert!(ridge_comparator(&[vec![1.0]], &[1.0, 2.0], 1.0).is_err());
    }

    #[test]
    fn regret_bound_values() {
        assert_eq!(vaw_regret_bound(3.0f64, 2.0, 5, 100, 0.0), 0.5);
        let b = vaw_regret_bound(1.0f64, 1.0, 1, 1, 1.0);
        assert!((b - (0.5 + 0.5 * 2f64.ln())).abs() < 1e-15);
        let (y, n) = (1.7f64, 4usize);
        let b1 = vaw_regret_bound(y, 2.0, n, 1000, 3.0);
        let b2 = vaw_regret_bound(y, 2.0, n, 2000, 3.0);
        assert!(b2 >= b1 && b2 - b1 <= 0.5 * y * y * n as f64 * 2f64.ln() + 1e-12);
    }
}
