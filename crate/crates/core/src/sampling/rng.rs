//! Reproducible random streams.
//!
//! Every sample index owns one ChaCha8 stream keyed by `(seed, index)`, so the
//! value of sample `i` does not depend on how samples are split among
//! workers. Normal deviates come from the Box–Muller transform applied to
//! 53-bit uniforms taken from the raw 64-bit output.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::qcore::C64;

const TWO_POW_M53: f64 = 1.0 / (1u64 << 53) as f64;

/// Independent stream for sample `index` under `seed`.
pub fn sample_stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform in `(0, 1]`.
fn open_unit(rng: &mut impl RngCore) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * TWO_POW_M53
}

/// Uniform in `[0, 1)`.
fn half_open_unit(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * TWO_POW_M53
}

/// Two independent standard normal deviates (Box–Muller).
pub fn standard_normal_pair(rng: &mut impl RngCore) -> (f64, f64) {
    let r = (-2.0 * open_unit(rng).ln()).sqrt();
    let (s, c) = (std::f64::consts::TAU * half_open_unit(rng)).sin_cos();
    (r * c, r * s)
}

/// Circular complex Gaussian with `E|z|² = 1`.
pub fn complex_gaussian(rng: &mut impl RngCore) -> C64 {
    let (x, y) = standard_normal_pair(rng);
    C64::new(x, y) * std::f64::consts::FRAC_1_SQRT_2
}
