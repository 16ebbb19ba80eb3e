//! Counter-based random streams.
//!
//! Every random quantity in a simulation comes from a ChaCha8 generator
//! keyed by `(master seed, purpose)` and positioned on stream `trial`. Trials
//! therefore never share state, and any trial can be regenerated alone.
//!
//! The key is `master ^ (purpose * 0x9E3779B97F4A7C15)` passed through
//! `ChaCha8Rng::seed_from_u64`; the stream number is the trial index.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// What a stream is used for. The discriminants are part of the scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    /// Voter points, then candidate points, then candidate excellence.
    Geometry = 1,
    /// Favorability error terms.
    Noise = 2,
    /// Choosing a subsample of voters.
    Sample = 3,
    /// Choosing the voter whose ballot changes.
    Opinion = 4,
    /// Uniform random integer ratings.
    Ratings = 5,
    /// Extra error added to an existing electorate.
    Perturbation = 6,
}

pub fn stream(master: u64, purpose: Purpose, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master ^ (purpose as u64).wrapping_mul(GOLDEN));
    rng.set_stream(trial);
    rng
}
