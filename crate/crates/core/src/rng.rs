//! Seeded random streams. Every random quantity in the crate is a pure
//! function of a `u64` seed and a [`Stream`] tag, so independent parts of a
//! trial (system, inputs, noise) never share draws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    System = 1,
    Inputs = 2,
    Noise = 3,
    Verifier = 4,
    Probe = 5,
    Regression = 6,
}

pub fn stream(seed: u64, tag: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(tag as u64);
    rng
}

pub fn standard_normal<T: Real, R: rand::Rng>(rng: &mut R) -> T {
    let g: f64 = StandardNormal.sample(rng);
    T::lit(g)
}

pub fn normal_vec<T: Real, R: rand::Rng>(rng: &mut R, len: usize) -> Vec<T> {
    (0..len).map(|_| standard_normal(rng)).collect()
}
