//! Monic Chebyshev polynomials: exact coefficients, stable evaluation, and
//! numeric verifiers for their real and complex bounds.

mod eval;
mod exact;
mod verify;

pub use eval::{eval_monic_complex, eval_monic_real, horner, horner_complex, ln_abs_monic_complex};
pub use exact::{chebyshev_decompose, chebyshev_reconstruct, chebyshev_t, chebyshev_table, ExactPolynomial, MonicChebyshev};
pub use verify::{
    flat_combination_max_coeff, flat_poly_growth_probe, verify_coefficient_bound, verify_coefficient_lower_envelope, verify_cos_cosh_bound,
    verify_flatness, verify_im_arccos_bound, verify_sector_bound, BoundReport, FlatProbeReport, SectorDegreeResult,
};

/// `monic_coeffs(n)`: the degree-`n` monic Chebyshev polynomial.
pub fn monic_coeffs(n: usize) -> MonicChebyshev {
    MonicChebyshev::new(n)
}
