//! Seeded pseudo-randomness shared by every sampled check.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

/// Seed used when neither a flag nor the environment supplies one.
pub const DEFAULT_SEED: u64 = 0x5EED_C0DE;

/// Deterministic generator for `seed`.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Numerator in `0..=20` and denominator in `1..=20`.
pub fn rational_parts<R: Rng + ?Sized>(rng: &mut R) -> (u64, u64) {
    (rng.gen_range(0..=20), rng.gen_range(1..=20))
}

/// A natural number in `0..=20`.
pub fn natural<R: Rng + ?Sized>(rng: &mut R) -> u64 {
    rng.gen_range(0..=20)
}
