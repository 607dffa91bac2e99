//! Deterministic random-number plumbing.
//!
//! All randomness in this crate flows from a single `u64` root seed. Each
//! independent consumer (a bootstrap replicate, a Monte Carlo repetition, a
//! network draw) receives its own ChaCha substream derived from that seed, so
//! results are identical regardless of evaluation order or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer; a cheap avalanche over a 64-bit word.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a child seed from `seed` for the purpose labelled by `tag`.
///
/// Distinct tags give (with overwhelming probability) unrelated child seeds;
/// the same `(seed, tag)` always gives the same child. Used for domain
/// separation between phases (network generation, per-repetition data draws,
/// per-repetition bootstrap runs).
pub fn child_seed(seed: u64, tag: u64) -> u64 {
    mix(seed ^ mix(tag))
}

/// ChaCha generator on substream `stream` of the generator family keyed by
/// `seed`.
///
/// Substreams of the same seed are independent ChaCha streams; replicate `b`
/// of a bootstrap run draws from `stream_rng(seed, b)`, which makes the run
/// reproducible and embarrassingly parallel at the same time.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
