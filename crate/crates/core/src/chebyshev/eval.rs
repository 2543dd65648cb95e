//! Floating-point evaluation of monic Chebyshev polynomials through the
//! trigonometric form, which stays well conditioned at degrees where the
//! monomial coefficients are far too large for Horner's rule.

use num_complex::Complex;

use crate::scalar::Real;

fn monic_scale<T: Real>(n: usize) -> T {
    T::lit(2.0).powi(1 - n as i32)
}

/// `M_n(x) = 2^{1−n} T_n(x)` for real `x`.
pub fn eval_monic_real<T: Real>(n: usize, x: T) -> T {
    if n == 0 {
        return T::one();
    }
    let nf = T::count(n);
    let ax = x.abs();
    let t = if ax <= T::one() {
        (nf * x.acos()).cos()
    } else {
        let mag = (nf * ax.acosh()).cosh();
        if x < T::zero() && n % 2 == 1 {
            -mag
        } else {
            mag
        }
    };
    monic_scale::<T>(n) * t
}

/// `M_n(z) = 2^{1−n} cos(n arccos z)` on the principal branch.
///
/// The value does not depend on the branch since `cos(n w)` is even and
/// `2π`-periodic in `w`.
pub fn eval_monic_complex<T: Real>(n: usize, z: Complex<T>) -> Complex<T> {
    if n == 0 {
        return Complex::new(T::one(), T::zero());
    }
    let w = z.acos();
    (w * T::count(n)).cos() * monic_scale::<T>(n)
}

/// `ln |M_n(z)|`, usable at degrees where `|M_n(z)|` underflows.
pub fn ln_abs_monic_complex(n: usize, z: Complex<f64>) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let w = z.acos() * n as f64;
    // |cos(a+ib)|² = cos²a + sinh²b
    let (a, b) = (w.re, w.im);
    let mag_sq = a.cos().powi(2) + b.sinh().powi(2);
    0.5 * mag_sq.ln() + (1.0 - n as f64) * std::f64::consts::LN_2
}

/// Horner's rule with the given monomial coefficients (lowest degree first).
pub fn horner<T: Real>(coefficients: &[T], x: T) -> T {
    coefficients.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
}

pub fn horner_complex<T: Real>(coefficients: &[T], z: Complex<T>) -> Complex<T> {
    coefficients.iter().rev().fold(Complex::new(T::zero(), T::zero()), |acc, &c| acc * z + c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chebyshev::MonicChebyshev;

    fn monomial_f64(n: usize) -> Vec<f64> {
        let mut c: Vec<f64> = MonicChebyshev::new(n).c_values();
        c.reverse();
        c
    }

    #[test]
    fn small_cases() {
        assert!((eval_monic_real(2, 0.0f64) + 0.5).abs() < 1e-15);
        assert!((eval_monic_real(10, 1.0f64) - 2f64.powi(-9)).abs() < 1e-18);
        assert_eq!(eval_monic_real(0, 0.3f64), 1.0);
        let z = Complex::new(0.3, -0.7);
        let m1 = eval_monic_complex(1, z);
        assert!((m1 - z).norm() < 1e-15);
    }

    #[test]
    fn real_matches_exact_horner_inside_and_outside() {
        use num_rational::BigRational;
        use num_traits::ToPrimitive;
        for n in 1..=30 {
            let exact_poly = MonicChebyshev::new(n).to_polynomial();
            for i in 0..=120 {
                let x = -1.2 + 2.4 * i as f64 / 120.0 + 1e-3;
                let trig = eval_monic_real(n, x);
                let exact = exact_poly.eval(&BigRational::from_float(x).unwrap()).to_f64().unwrap();
                let scale = exact.abs().max(2f64.powi(1 - n as i32));
                assert!((trig - exact).abs() <= 1e-9 * scale, "n={n} x={x}: {trig} vs {exact}");
            }
        }
    }

    #[test]
    fn float_horner_is_fine_at_low_degree() {
        let c = monomial_f64(6);
        assert!((horner(&c, 0.4) - eval_monic_real(6, 0.4)).abs() < 1e-14);
    }

    #[test]
    fn complex_agrees_with_real_on_interval() {
        for n in [1, 2, 7, 20, 33] {
            for i in 0..=50 {
                let x = -1.0 + i as f64 / 25.0;
                let r = eval_monic_real(n, x);
                let c = eval_monic_complex(n, Complex::new(x, 0.0));
                assert!((c.re - r).abs() <= 1e-12 * 2f64.powi(1 - n as i32).max(r.abs()));
                assert!(c.im.abs() <= 1e-12 * 2f64.powi(1 - n as i32));
            }
        }
    }

    #[test]
    fn composite_bound_near_unit_circle() {
        let s = 0.001f64;
        let z = Complex::from_polar(1.0, s);
        let v = eval_monic_complex(5, z);
        assert!(v.norm() <= 2f64.powi(-4) * (5.0 * 8.0 * s.sqrt()).cosh());
    }

    #[test]
    fn log_magnitude_matches_direct() {
        let z = Complex::from_polar(0.9f64, 0.01);
        for n in [1, 5, 40] {
            let direct = eval_monic_complex(n, z).norm().ln();
            assert!((ln_abs_monic_complex(n, z) - direct).abs() < 1e-10);
        }
    }

    #[test]
    fn single_precision_path() {
        let v = eval_monic_real(3, 0.5f32);
        assert!((v - (0.125 - 0.375)).abs() < 1e-6);
    }
}
