//! Seed derivation.
//!
//! Trial `i` of a campaign with base seed `b` runs on seed
//! `mix_seed(b, i)`, which is the `i`-th output of a SplitMix64 generator
//! started from state `b`. Within a trial every random consumer gets its own
//! ChaCha8 stream keyed by that seed, so changing one consumer (for example
//! the SNR, which alters nothing in the channel draws) never shifts the
//! random numbers seen by another.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn mix_seed(base_seed: u64, trial: u64) -> u64 {
    splitmix64(base_seed.wrapping_add(trial.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Independent random streams used inside one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Channel = 0,
    Estimation = 1,
    Protocol = 2,
    Trunk = 3,
    Oracle = 4,
}

pub fn stream_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}
