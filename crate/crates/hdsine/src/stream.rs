//! Deterministic per-trial random streams.
//!
//! Every randomized loop in this crate derives one substream per trial from
//! `(master seed, trial index)`. Results are therefore reproducible for a
//! fixed seed regardless of thread count or scheduling.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::Vector;

/// SplitMix64 finalizer; decorrelates consecutive indices under one seed.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// RNG for a single trial of a seeded experiment.
pub fn trial_rng(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, index))
}

/// Vector with i.i.d. standard normal coordinates.
pub fn gaussian_vector(rng: &mut impl Rng, dim: usize) -> Vector {
    Vector::new((0..dim).map(|_| rng.sample(StandardNormal)).collect())
        .expect("normal samples are finite")
}
