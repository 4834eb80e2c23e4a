//! Seed derivation. Every random quantity in a realization is drawn from a
//! stream keyed by `(realization seed, purpose)` so results never depend on
//! evaluation order or worker count.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function. A bijection on `u64`.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of realization `index` under `master`.
///
/// For a fixed master seed this is injective in `index`: the affine map
/// `master + index * GOLDEN_GAMMA` is injective (odd multiplier) and `mix64`
/// is a bijection.
pub fn realization_seed(master: u64, index: u64) -> u64 {
    mix64(master.wrapping_add(index.wrapping_mul(GOLDEN_GAMMA)))
}

/// Independent random streams inside one realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Buildings = 1,
    Sites = 2,
    LegacyPlacement = 3,
    EntrantPlacement = 4,
    LegacyChannels = 5,
    EntrantChannels = 6,
    Shadowing = 7,
    SiteAssignment = 8,
}

pub fn stream_seed(seed: u64, stream: Stream) -> u64 {
    mix64(seed ^ mix64((stream as u64).wrapping_mul(GOLDEN_GAMMA)))
}

pub fn stream_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(seed, stream))
}

/// Generator for the `index`-th item of a stream, independent of how many
/// other items are drawn.
pub fn indexed_rng(seed: u64, stream: Stream, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix64(
        stream_seed(seed, stream) ^ mix64(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)),
    ))
}

/// Key for a quantity shared by an unordered node pair.
pub fn pair_key(seed: u64, a: u64, b: u64) -> u64 {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    mix64(stream_seed(seed, Stream::Shadowing) ^ mix64(lo.wrapping_mul(GOLDEN_GAMMA) ^ hi.rotate_left(32)))
}

/// Minimal SplitMix64 generator, cheap enough to instantiate per node pair.
#[derive(Debug, Clone)]
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(state: u64) -> Self {
        SplitMix64(state)
    }
}

impl RngCore for SplitMix64 {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(GOLDEN_GAMMA);
        mix64(self.0)
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        for chunk in dst.chunks_mut(8) {
            let v = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&v[..chunk.len()]);
        }
    }
}
