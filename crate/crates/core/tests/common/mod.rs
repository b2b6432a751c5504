#![allow(dead_code)]

use mpinv_core::numcore::Tolerance;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn tol() -> Tolerance {
    Tolerance::default()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
