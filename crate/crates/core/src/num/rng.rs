use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::normal::quantile_f64;

const INV_2_POW_53: f64 = 1.0 / (1u64 << 53) as f64;

/// A seeded ChaCha8 stream addressed by `(master_seed, stream_id)`.
///
/// ChaCha's 64-bit stream counter gives every id its own non-overlapping
/// keystream, so substreams are cheap and independent. Normals are produced by
/// inversion, one uniform per normal, which keeps consumption per path fixed.
#[derive(Debug, Clone)]
pub struct RandomStream {
    master_seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_id);
        Self {
            master_seed,
            stream_id,
            rng,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Fresh stream at `stream_id + offset` under the same master seed.
    pub fn substream(&self, offset: u64) -> Self {
        Self::new(self.master_seed, self.stream_id.wrapping_add(offset))
    }

    /// Uniform draw strictly inside (0, 1), on the 2^-53 grid offset by half a step.
    #[inline]
    pub fn next_uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * INV_2_POW_53
    }

    #[inline]
    pub fn next_standard_normal(&mut self) -> f64 {
        quantile_f64(self.next_uniform())
    }

    pub fn sample_uniform(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.next_uniform()).collect()
    }

    pub fn sample_standard_normal(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.next_standard_normal()).collect()
    }
}
