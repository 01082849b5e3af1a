#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub use online_softmax::instrumentation::oracle::{relative_error, ulp_distance};

/// Unit roundoff of single precision, 2^-24.
pub const UNIT_ROUNDOFF: f64 = f32::EPSILON as f64 / 2.0;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_vec(rng: &mut ChaCha8Rng, len: usize, magnitude: f32) -> Vec<f32> {
    (0..len).map(|_| rng.random_range(-magnitude..=magnitude)).collect()
}

pub fn normal_vec(rng: &mut ChaCha8Rng, len: usize) -> Vec<f32> {
    (0..len).map(|_| rng.sample(StandardNormal)).collect()
}

/// A-priori relative error bound for a single-precision softmax output:
/// recursive summation of `V` terms plus one rescale per element, the
/// exponential, the division, and rounding of the exponent argument
/// `x - m` (an absolute error of `|x - m| u` becomes a relative error of
/// the exponential).
pub fn single_precision_bound(x: &[f32]) -> f64 {
    let m = x.iter().copied().fold(f32::NEG_INFINITY, f32::max) as f64;
    let spread = x.iter().map(|&v| m - v as f64).fold(0.0, f64::max);
    ((3 * x.len() + 8) as f64 + spread) * UNIT_ROUNDOFF
}

pub fn max_ulps(a: &[f32], b: &[f32]) -> u32 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(&p, &q)| ulp_distance(p, q))
        .max()
        .unwrap_or(0)
}

pub fn max_relative(a: &[f32], b: &[f32]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&p, &q)| relative_error(p as f64, q as f64))
        .fold(0.0, f64::max)
}

/// Largest relative error of `y` against the oracle over elements where the
/// oracle exceeds 1e-30.
pub fn max_relative_to_oracle(y: &[f32], oracle: &[f64]) -> f64 {
    y.iter()
        .zip(oracle)
        .filter(|(_, &o)| o > 1e-30)
        .map(|(&a, &o)| relative_error(a as f64, o))
        .fold(0.0, f64::max)
}

pub fn first_argmax(v: &[f32]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}
