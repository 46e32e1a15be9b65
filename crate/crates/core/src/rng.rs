//! Keyed random streams.
//!
//! A [`Stream`] is a 64-bit key. Child streams are derived by hashing the key
//! with a tag, and each edge draw gets its own ChaCha8 generator whose seed
//! is the stream key together with the `(t, i, j)` coordinates. Draw order
//! therefore never depends on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Order-sensitive hash of a sequence of integers.
pub fn derive_seed(parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(0x6A09_E667_F3BC_C909, |acc, &p| mix64(acc ^ mix64(p)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Stream(u64);

impl Stream {
    pub const fn new(seed: u64) -> Self {
        Stream(seed)
    }

    pub fn key(self) -> u64 {
        self.0
    }

    pub fn child(self, tag: u64) -> Stream {
        Stream(derive_seed(&[self.0, tag]))
    }

    /// A generator for sequential use (e.g. block labels).
    pub fn rng(self) -> ChaCha8Rng {
        self.keyed_rng(u32::MAX, u32::MAX, u32::MAX)
    }

    /// The generator for edge `(i, j)` of graph `t`.
    pub fn edge_rng(self, t: usize, i: usize, j: usize) -> ChaCha8Rng {
        self.keyed_rng(t as u32, i as u32, j as u32)
    }

    fn keyed_rng(self, t: u32, i: u32, j: u32) -> ChaCha8Rng {
        let mut seed = [0u8; 32];
        seed[..8].copy_from_slice(&self.0.to_le_bytes());
        seed[8..12].copy_from_slice(&t.to_le_bytes());
        seed[12..16].copy_from_slice(&i.to_le_bytes());
        seed[16..20].copy_from_slice(&j.to_le_bytes());
        ChaCha8Rng::from_seed(seed)
    }
}
