//! Exact Chebyshev arithmetic over big integers and dyadic rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::Real;

/// Integer monomial coefficients of `T_0, …, T_{n_max}` via `T_{k+1} = 2x T_k − T_{k−1}`.
pub fn chebyshev_table(n_max: usize) -> Vec<Vec<BigInt>> {
    let mut table: Vec<Vec<BigInt>> = Vec::with_capacity(n_max + 1);
    table.push(vec![BigInt::one()]);
    if n_max == 0 {
        return table;
    }
    table.push(vec![BigInt::zero(), BigInt::one()]);
    for k in 1..n_max {
        let mut next = vec![BigInt::zero(); k + 2];
        for (j, c) in table[k].iter().enumerate() {
            next[j + 1] += c << 1;
        }
        for (j, c) in table[k - 1].iter().enumerate() {
            next[j] -= c;
        }
        table.push(next);
    }
    table
}

/// Integer coefficients of `T_n`, lowest degree first.
pub fn chebyshev_t(n: usize) -> Vec<BigInt> {
    chebyshev_table(n).pop().expect("table has n+1 rows")
}

/// Monic Chebyshev polynomial `M_n = 2^{1−n} T_n` (and `M_0 = 1`).
///
/// Coefficients are stored as integer numerators over the common
/// denominator `2^scale_log2`, indexed by monomial degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonicChebyshev {
    pub degree: usize,
    pub numerators: Vec<BigInt>,
    pub scale_log2: u32,
}

impl MonicChebyshev {
    pub fn new(n: usize) -> Self {
        Self::from_t(n, chebyshev_t(n))
    }

    fn from_t(n: usize, t: Vec<BigInt>) -> Self {
        let scale_log2 = if n == 0 { 0 } else { (n - 1) as u32 };
        Self { degree: n, numerators: t, scale_log2 }
    }

    /// All monic polynomials of degree `0..=n_max`, sharing one recurrence pass.
    pub fn up_to(n_max: usize) -> Vec<Self> {
        chebyshev_table(n_max).into_iter().enumerate().map(|(n, t)| Self::from_t(n, t)).collect()
    }

    fn denominator(&self) -> BigInt {
        BigInt::one() << self.scale_log2
    }

    /// Coefficient of `x^j`.
    pub fn monomial_coefficient(&self, j: usize) -> BigRational {
        match self.numerators.get(j) {
            Some(k) => BigRational::new(k.clone(), self.denominator()),
            None => BigRational::zero(),
        }
    }

    /// `c_i`, the coefficient of `x^{n−i}`; `c_0 = 1`.
    pub fn c(&self, i: usize) -> BigRational {
        assert!(i <= self.degree, "index {i} exceeds degree {}", self.degree);
        self.monomial_coefficient(self.degree - i)
    }

    /// `[c_0, c_1, …, c_n]` rounded to the working precision.
    pub fn c_values<T: Real>(&self) -> Vec<T> {
        let scale = T::lit(2f64.powi(-(self.scale_log2 as i32)));
        (0..=self.degree)
            .map(|i| T::lit(self.numerators[self.degree - i].to_f64().expect("finite")) * scale)
            .collect()
    }

    /// Numerator with the largest magnitude among `c_1, …, c_n`.
    fn max_abs_numerator(&self) -> BigInt {
        (1..=self.degree)
            .map(|i| self.numerators[self.degree - i].abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// `max_{1≤i≤n} |c_i|`, exactly.
    pub fn max_abs_c(&self) -> BigRational {
        BigRational::new(self.max_abs_numerator(), self.denominator())
    }

    /// Exact test of `max_i |c_i| ≤ 2^{(num/den)·n}`.
    pub fn max_c_at_most_pow2(&self, num: u32, den: u32) -> bool {
        // (k / 2^s)^den ≤ 2^{num n}  ⇔  k^den ≤ 2^{num n + den s}
        let k = self.max_abs_numerator();
        let lhs = num_traits::pow(k, den as usize);
        let rhs = BigInt::one() << (num as usize * self.degree + den as usize * self.scale_log2 as usize);
        lhs <= rhs
    }

    /// Exact test of `max_i |c_i| ≥ 2^{(num/den)·n}`.
    pub fn max_c_at_least_pow2(&self, num: u32, den: u32) -> bool {
        let k = self.max_abs_numerator();
        let lhs = num_traits::pow(k, den as usize);
        let rhs = BigInt::one() << (num as usize * self.degree + den as usize * self.scale_log2 as usize);
        lhs >= rhs
    }

    /// `log₂(max_i |c_i|) / n`.
    pub fn growth_rate(&self) -> f64 {
        if self.degree == 0 {
            return 0.0;
        }
        let k = self.max_abs_numerator();
        if k.is_zero() {
            return f64::NEG_INFINITY;
        }
        (log2_bigint(&k) - self.scale_log2 as f64) / self.degree as f64
    }

    pub fn to_polynomial(&self) -> ExactPolynomial {
        ExactPolynomial::new((0..=self.degree).map(|j| self.monomial_coefficient(j)).collect())
    }

    /// FNV-1a over the decimal numerators; used as a provenance tag.
    pub fn checksum(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let text = self.numerators.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",");
        for b in text.bytes().chain(self.scale_log2.to_le_bytes()) {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        h
    }
}

pub(crate) fn log2_bigint(k: &BigInt) -> f64 {
    let bits = k.bits();
    if bits <= 60 {
        return k.abs().to_f64().expect("small").log2();
    }
    let shift = bits - 60;
    let top = (k.abs() >> shift).to_f64().expect("small");
    top.log2() + shift as f64
}

/// Polynomial with exact rational coefficients, index = monomial degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactPolynomial {
    pub coefficients: Vec<BigRational>,
}

impl ExactPolynomial {
    pub fn new(mut coefficients: Vec<BigRational>) -> Self {
        while coefficients.len() > 1 && coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        if coefficients.is_empty() {
            coefficients.push(BigRational::zero());
        }
        Self { coefficients }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coefficients.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn max_abs_coefficient(&self) -> BigRational {
        self.coefficients.iter().map(|c| c.abs()).max().unwrap_or_else(BigRational::zero)
    }

    /// True when every denominator is a power of two.
    pub fn is_dyadic(&self) -> bool {
        self.coefficients.iter().all(|c| {
            let d = c.denom();
            (d & (d - BigInt::one())).is_zero()
        })
    }
}

/// Change of basis from monomials to Chebyshev polynomials: returns `b` with
/// `poly = Σ b_k T_k` exactly.
pub fn chebyshev_decompose(poly: &ExactPolynomial) -> Vec<BigRational> {
    let n = poly.degree();
    let table = chebyshev_table(n);
    let mut rem = poly.coefficients.clone();
    let mut b = vec![BigRational::zero(); n + 1];
    for k in (0..=n).rev() {
        if rem[k].is_zero() {
            continue;
        }
        let lead = BigRational::from_integer(table[k][k].clone());
        let coef = &rem[k] / &lead;
        for (j, t) in table[k].iter().enumerate() {
            if !t.is_zero() {
                rem[j] -= &coef * BigRational::from_integer(t.clone());
            }
        }
        b[k] = coef;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    b
}

/// `Σ b_k T_k` in the monomial basis.
pub fn chebyshev_reconstruct(b: &[BigRational]) -> ExactPolynomial {
    if b.is_empty() {
        return ExactPolynomial::new(vec![]);
    }
    let table = chebyshev_table(b.len() - 1);
    let mut out = vec![BigRational::zero(); b.len()];
    for (bk, t) in b.iter().zip(&table) {
        if bk.is_zero() {
            continue;
        }
        for (j, c) in t.iter().enumerate() {
            if !c.is_zero() {
                out[j] += bk * BigRational::from_integer(c.clone());
            }
        }
    }
    ExactPolynomial::new(out)
}
