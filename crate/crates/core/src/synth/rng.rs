//! Seeded sub-streams.
//!
//! Every random quantity comes from a ChaCha8 generator keyed by the master
//! seed, with the stream number encoding what is drawn and for which
//! `(n, realization)` cell. Cells therefore never share randomness and the
//! draw order inside one cell does not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Purpose {
    Signal = 1,
    Noise = 2,
    AmbientWindow = 3,
    ColoredSource = 4,
}

pub fn stream_id(purpose: Purpose, n: usize, realization: usize) -> u64 {
    ((purpose as u64) << 56) | (((n as u64) & 0x00ff_ffff) << 32) | (realization as u64 & 0xffff_ffff)
}

pub fn sub_stream(master_seed: u64, purpose: Purpose, n: usize, realization: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream_id(purpose, n, realization));
    rng
}
