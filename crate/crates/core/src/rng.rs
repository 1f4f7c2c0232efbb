//! Seeded random streams.
//!
//! Every run carries a single 64-bit seed; components draw from named
//! substreams so that, for instance, re-seeding the sampler leaves the circuit
//! initialization untouched.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stream {
    CircuitInit,
    NnInit,
    Sampling,
    Noise,
    Transfer,
    Graph,
    Aux,
}

impl Stream {
    fn id(self) -> u64 {
        match self {
            Stream::CircuitInit => 1,
            Stream::NnInit => 2,
            Stream::Sampling => 3,
            Stream::Noise => 4,
            Stream::Transfer => 5,
            Stream::Graph => 6,
            Stream::Aux => 7,
        }
    }
}

/// Independent generator for `stream` of the run seeded with `seed`.
pub fn substream(seed: u64, stream: Stream) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream.id());
    rng
}

/// Generator for a sub-task (basis, trajectory, ...) of a stream.
pub fn derived(seed: u64, stream: Stream, index: u64) -> Rng {
    let mixed = splitmix64(seed ^ splitmix64(stream.id().wrapping_mul(0x9E37_79B9) ^ index));
    let mut rng = ChaCha8Rng::seed_from_u64(mixed);
    rng.set_stream(stream.id());
    rng
}

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
