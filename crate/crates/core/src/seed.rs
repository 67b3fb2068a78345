//! Seeded randomness and seed splitting.
//!
//! Child seeds are derived with the SplitMix64 finalizer applied to
//! `parent ^ hash(label)`, where `hash` is 64-bit FNV-1a over the label bytes.
//! Every algorithm takes an explicit seed and builds a `ChaCha8Rng` from it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Child seed for a named stream.
pub fn derive(parent: u64, label: &str) -> u64 {
    splitmix(parent ^ fnv1a(label.as_bytes()))
}

/// Child seed for an indexed stream.
pub fn derive_index(parent: u64, index: u64) -> u64 {
    splitmix(parent ^ splitmix(index.wrapping_add(0x5851_f42d_4c95_7f2d)))
}
