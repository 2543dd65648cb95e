//! Single-input single-output linear dynamical systems
//!
//! ```text
//! h_t = A h_{t-1} + B u_t,    y_t = C h_t,    h_0 = 0
//! ```
//!
//! Systems are generated with an exactly known spectrum: `A = P D P⁻¹` where
//! `D` is block diagonal with 2×2 rotation-scaling blocks (plus one real
//! entry when the dimension is odd) and `P = Q₁ Σ Q₂ᵀ` has prescribed
//! singular values, so the condition number of the diagonalizing matrix is
//! known in closed form.

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, UspError};
use crate::linalg::{orthonormalize_columns, Matrix};
use crate::rng::{normal_vec, standard_normal, stream, Stream};
use crate::scalar::{dot, norm, Real};

/// Upper limit on the condition number of the random similarity.
pub const MAX_DIAG_CONDITION: f64 = 10.0;

/// How the eigenvalue phases are constrained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum SpectrumBound<T> {
    /// `|Im λ| ≤ τ` (the experimental protocol).
    Imag(T),
    /// `|arg λ| ≤ s` (the regime covered by the sector bound).
    Arg(T),
}

#[derive(Debug, Clone)]
pub struct LdsSystem<T> {
    pub hidden_dim: usize,
    pub transition: Matrix<T>,
    pub input_map: Vec<T>,
    pub output_map: Vec<T>,
    pub eigenvalues: Vec<Complex<T>>,
    /// `‖P‖·‖P⁻¹‖` for the matrix diagonalizing `transition`.
    pub diag_condition: T,
    pub spectral_gap: T,
    pub spectrum: SpectrumBound<T>,
    pub seed: u64,
}

/// Human-readable record of a system, enough to rebuild it bit-for-bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemRecord {
    pub dimension: usize,
    pub transition_row_major: Vec<f64>,
    pub input_map: Vec<f64>,
    pub output_map: Vec<f64>,
    /// `[re, im]` pairs.
    pub eigenvalues: Vec<[f64; 2]>,
    pub kappa: f64,
    pub delta: f64,
    pub tau: f64,
    pub bound_kind: String,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignalTrace<T> {
    pub inputs: Vec<T>,
    pub outputs: Vec<T>,
    pub outputs_clean: Vec<T>,
}

impl<T> SignalTrace<T> {
    pub fn horizon(&self) -> usize {
        self.inputs.len()
    }
}

/// Generates a system whose eigenvalues have modulus `1 - delta` and imaginary
/// parts bounded by `tau`.
pub fn generate_system<T: Real>(d: usize, delta: T, tau: T, seed: u64) -> Result<LdsSystem<T>> {
    generate_system_with(d, delta, SpectrumBound::Imag(tau), seed)
}

pub fn generate_system_with<T: Real>(
    d: usize,
    delta: T,
    bound: SpectrumBound<T>,
    seed: u64,
) -> Result<LdsSystem<T>> {
    if d == 0 {
        return Err(invalid("hidden dimension must be at least 1"));
    }
    if !(delta >= T::zero() && delta < T::one()) {
        return Err(invalid(format!("delta must lie in [0, 1), got {delta}")));
    }
    let pi = T::lit(std::f64::consts::PI);
    let (max_phase, positive_real) = match bound {
        SpectrumBound::Imag(tau) => {
            if !(tau >= T::zero() && tau <= pi) {
                return Err(invalid(format!("tau must lie in [0, pi], got {tau}")));
            }
            ((tau / (T::one() - delta)).min(T::one()).asin(), false)
        }
        SpectrumBound::Arg(s) => {
            if !(s >= T::zero() && s <= pi) {
                return Err(invalid(format!("argument bound must lie in [0, pi], got {s}")));
            }
            (s, true)
        }
    };

    let mut rng = stream(seed, Stream::System);
    let radius = T::one() - delta;

    // Block-diagonal spectrum.
    let mut block = Matrix::zeros(d, d);
    let mut eigenvalues = Vec::with_capacity(d);
    for b in 0..d / 2 {
        let u: f64 = rng.random::<f64>() * 2.0 - 1.0;
        let theta = T::lit(u) * max_phase;
        let (re, im) = (radius * theta.cos(), radius * theta.sin());
        let i = 2 * b;
        block[(i, i)] = re;
        block[(i, i + 1)] = -im;
        block[(i + 1, i)] = im;
        block[(i + 1, i + 1)] = re;
        eigenvalues.push(Complex::new(re, im));
        eigenvalues.push(Complex::new(re, -im));
    }
    if d % 2 == 1 {
        let sign = if positive_real || rng.random::<bool>() { T::one() } else { -T::one() };
        block[(d - 1, d - 1)] = sign * radius;
        eigenvalues.push(Complex::new(sign * radius, T::zero()));
    }

    // Similarity P = Q1 diag(sigma) Q2ᵀ with singular values in [1, MAX_DIAG_CONDITION].
    let (transition, diag_condition) = if d == 1 {
        (block, T::one())
    } else {
        let q1 = random_orthogonal(&mut rng, d)?;
        let q2 = random_orthogonal(&mut rng, d)?;
        let log_max = MAX_DIAG_CONDITION.log10();
        let mut sigma: Vec<T> = (0..d).map(|_| T::lit(10f64.powf(rng.random::<f64>() * log_max))).collect();
        // smallest singular value is pinned at 1, so kappa = max(sigma)
        sigma[0] = T::one();
        let s_max = sigma.iter().cloned().fold(T::one(), T::max);
        let p = q1.matmul(&Matrix::from_diagonal(&sigma)).matmul(&q2.transpose());
        let inv_sigma: Vec<T> = sigma.iter().map(|&s| s.recip()).collect();
        let p_inv = q2.matmul(&Matrix::from_diagonal(&inv_sigma)).matmul(&q1.transpose());
        (p.matmul(&block).matmul(&p_inv), s_max)
    };

    let mut input_map: Vec<T> = normal_vec(&mut rng, d);
    let mut output_map: Vec<T> = normal_vec(&mut rng, d);
    normalize(&mut input_map);
    normalize(&mut output_map);

    Ok(LdsSystem {
        hidden_dim: d,
        transition,
        input_map,
        output_map,
        eigenvalues,
        diag_condition,
        spectral_gap: delta,
        spectrum: bound,
        seed,
    })
}

fn random_orthogonal<T: Real, R: Rng>(rng: &mut R, d: usize) -> Result<Matrix<T>> {
    loop {
        let mut m = Matrix::from_row_major(d, d, normal_vec(rng, d * d))?;
        if orthonormalize_columns(&mut m).is_ok() {
            return Ok(m);
        }
    }
}

fn normalize<T: Real>(v: &mut [T]) {
    let n = norm(v);
    v.iter_mut().for_each(|x| *x /= n);
}

impl<T: Real> LdsSystem<T> {
    /// Builds a system from explicit matrices. The caller supplies the spectrum
    /// metadata; nothing is checked beyond dimensions.
    pub fn from_parts(
        transition: Matrix<T>,
        input_map: Vec<T>,
        output_map: Vec<T>,
        eigenvalues: Vec<Complex<T>>,
        diag_condition: T,
    ) -> Result<Self> {
        let d = transition.rows();
        if !transition.is_square() {
            return Err(UspError::DimensionMismatch { expected: d, found: transition.cols() });
        }
        for v in [&input_map, &output_map] {
            if v.len() != d {
                return Err(UspError::DimensionMismatch { expected: d, found: v.len() });
            }
        }
        let max_mod = eigenvalues.iter().map(|z| z.norm()).fold(T::zero(), T::max);
        let max_arg = eigenvalues.iter().map(|z| z.arg().abs()).fold(T::zero(), T::max);
        Ok(Self {
            hidden_dim: d,
            transition,
            input_map,
            output_map,
            eigenvalues,
            diag_condition,
            spectral_gap: T::one() - max_mod,
            spectrum: SpectrumBound::Arg(max_arg),
            seed: 0,
        })
    }

    /// One-dimensional system `h_t = a h_{t-1} + b u_t`, `y_t = c h_t`.
    pub fn scalar(a: T, b: T, c: T) -> Self {
        Self::from_parts(
            Matrix::from_row_major(1, 1, vec![a]).expect("1x1"),
            vec![b],
            vec![c],
            vec![Complex::new(a, T::zero())],
            T::one(),
        )
        .expect("scalar system is well formed")
    }

    pub fn input_norm(&self) -> T {
        norm(&self.input_map)
    }

    pub fn output_norm(&self) -> T {
        norm(&self.output_map)
    }

    pub fn max_eigen_modulus(&self) -> T {
        self.eigenvalues.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub fn record(&self) -> SystemRecord {
        let (kind, tau) = match self.spectrum {
            SpectrumBound::Imag(t) => ("imag", t),
            SpectrumBound::Arg(s) => ("arg", s),
        };
        SystemRecord {
            dimension: self.hidden_dim,
            transition_row_major: self.transition.as_slice().iter().map(|x| x.as_f64()).collect(),
            input_map: self.input_map.iter().map(|x| x.as_f64()).collect(),
            output_map: self.output_map.iter().map(|x| x.as_f64()).collect(),
            eigenvalues: self.eigenvalues.iter().map(|z| [z.re.as_f64(), z.im.as_f64()]).collect(),
            kappa: self.diag_condition.as_f64(),
            delta: self.spectral_gap.as_f64(),
            tau: tau.as_f64(),
            bound_kind: kind.to_string(),
            seed: self.seed,
        }
    }

    /// Rolls the state forward from `h_0 = 0`, returning `h_1, …, h_T`.
    pub fn states(&self, inputs: &[T]) -> Vec<Vec<T>> {
        let mut h = vec![T::zero(); self.hidden_dim];
        let mut out = Vec::with_capacity(inputs.len());
        for &u in inputs {
            let mut next = self.transition.matvec(&h);
            for (n, &b) in next.iter_mut().zip(&self.input_map) {
                *n += b * u;
            }
            h = next;
            out.push(h.clone());
        }
        out
    }
}

/// Simulates the system from a zero initial state and adds Gaussian
/// observation noise with standard deviation `noise_sigma`.
pub fn simulate<T: Real>(system: &LdsSystem<T>, inputs: &[T], noise_sigma: T, seed: u64) -> Result<SignalTrace<T>> {
    if inputs.is_empty() {
        return Err(invalid("input sequence must be nonempty"));
    }
    if !(noise_sigma >= T::zero()) {
        return Err(invalid(format!("noise sigma must be non-negative, got {noise_sigma}")));
    }
    let d = system.hidden_dim;
    let mut h = vec![T::zero(); d];
    let mut next = vec![T::zero(); d];
    let mut outputs_clean = Vec::with_capacity(inputs.len());
    for &u in inputs {
        for (i, n) in next.iter_mut().enumerate() {
            *n = dot(system.transition.row(i), &h) + system.input_map[i] * u;
        }
        std::mem::swap(&mut h, &mut next);
        outputs_clean.push(dot(&system.output_map, &h));
    }
    let outputs = if noise_sigma == T::zero() {
        outputs_clean.clone()
    } else {
        let mut rng = stream(seed, Stream::Noise);
        outputs_clean.iter().map(|&y| y + noise_sigma * standard_normal::<T, _>(&mut rng)).collect()
    };
    Ok(SignalTrace { inputs: inputs.to_vec(), outputs, outputs_clean })
}

/// Markov parameters `θ_s = C Aˢ B` for `s = 0..length`, by iterated matrix-vector products.
pub fn impulse_response<T: Real>(system: &LdsSystem<T>, length: usize) -> Vec<T> {
    let mut col = system.input_map.clone();
    let mut out = Vec::with_capacity(length);
    for s in 0..length {
        out.push(dot(&system.output_map, &col));
        if s + 1 < length {
            col = system.transition.matvec(&col);
        }
    }
    out
}

/// `u_t = g_t / ln(5(t+2))`, `t` 1-based, `g_t` standard normal.
pub fn gen_inputs_decaying<T: Real>(horizon: usize, seed: u64) -> Vec<T> {
    let mut rng = stream(seed, Stream::Inputs);
    (1..=horizon)
        .map(|t| {
            let g: T = standard_normal(&mut rng);
            g / T::lit((5.0 * (t as f64 + 2.0)).ln())
        })
        .collect()
}

/// Unit-stationary-variance AR(1): `u_t = ρ u_{t-1} + √(1-ρ²) g_t`, `u_1 = g_1`.
pub fn gen_inputs_ar1<T: Real>(horizon: usize, rho: T, seed: u64) -> Result<Vec<T>> {
    if !(rho.abs() < T::one()) {
        return Err(invalid(format!("AR(1) coefficient must satisfy |rho| < 1, got {rho}")));
    }
    let mut rng = stream(seed, Stream::Inputs);
    let scale = (T::one() - rho * rho).sqrt();
    let mut out = Vec::with_capacity(horizon);
    for t in 0..horizon {
        let g: T = standard_normal(&mut rng);
        let u = if t == 0 { g } else { rho * out[t - 1] + scale * g };
        out.push(u);
    }
    Ok(out)
}
