//! Seeded random source shared by every sampling routine.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Seedable, splittable generator for protocol sampling.
///
/// Backed by ChaCha20 so that a seed produces the same stream on every
/// platform. The identifier in [`ProtocolRng::ALGORITHM`] is recorded in run
/// logs.
#[derive(Debug, Clone)]
pub struct ProtocolRng {
    inner: ChaCha20Rng,
}

impl ProtocolRng {
    pub const ALGORITHM: &'static str = "chacha20/rand_chacha-0.9";

    pub fn seed_from_u64(seed: u64) -> Self {
        Self {
            inner: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    /// Derive an independent child generator. The parent stream advances.
    pub fn split(&mut self) -> Self {
        let mut seed = [0u8; 32];
        self.inner.fill_bytes(&mut seed);
        Self {
            inner: ChaCha20Rng::from_seed(seed),
        }
    }

    /// Uniform draw in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        rand::Rng::random::<f64>(&mut self.inner)
    }
}

impl RngCore for ProtocolRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }
}
