//! Deterministic derivation of per-replicate random streams from one master
//! seed.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

/// Derives the seed for replicate `index` from `master`.
///
/// The input map `index → master + (index + 1) · γ (mod 2⁶⁴)` with odd γ is
/// injective for a fixed master, and the splitmix64 finalizer is a bijection
/// on `u64`, so two replicates of the same run can never share a stream.
pub fn child_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A fresh generator for replicate `index` of the run seeded by `master`.
pub fn rng_for(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(child_seed(master, index))
}

/// A generator seeded directly by `seed`.
pub fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
