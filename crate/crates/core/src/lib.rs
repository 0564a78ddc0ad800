//! Exact combinatorics and simulation for reconstructing a stored word
//! from several noisy reads of it.
//!
//! The library is organized around one question: given a codeword
//! transmitted through N independent channels that each introduce a
//! bounded number of errors (substitutions, erasures, both combined,
//! deletions, or insertions), what can be said about the list T(Y) of
//! codewords consistent with every output? The modules provide
//!
//! * [`word`]: words over Z_q with erasure and unknown markers,
//! * [`bounds`]: closed-form channel counts, list-size bounds, and
//!   exact thresholds, all in big-integer / rational arithmetic,
//! * [`balls`]: error-ball enumeration, intersections, and the
//!   brute-force reconstruction list,
//! * [`channels`]: seeded simulation of the N-channel transmission,
//! * [`codebook`]: explicit codes, two reference constructions, and a
//!   brute-force bounded-distance decoder,
//! * [`decoders`]: the majority-vote decoder, its binary list-decoding
//!   variant, erasure resolution, and a two-read insertion decoder,
//! * [`probelab`]: exact and Monte Carlo recovery-probability
//!   experiments,
//! * [`verify`]: batch suites that re-derive the closed forms from
//!   enumeration oracles.
//!
//! Everything that samples takes an explicit 64-bit seed and is
//! reproducible bit-for-bit, independently of the worker count used by
//! the parallel execution paths in [`exec`].

pub mod balls;
pub mod bounds;
pub mod channels;
pub mod codebook;
pub mod decoders;
pub mod error;
pub mod exec;
mod fixedpoint;
pub mod probelab;
pub mod verify;
pub mod word;

pub use error::{Error, Result};

/// Enumeration limits used by the potentially explosive operations.
///
/// Every cap is a number of items (words, batches, candidate
/// completions); operations report [`Error::CapExceeded`] instead of
/// materializing more. The `RECONLAB_CAP` environment variable, when
/// set to a positive integer, overrides every field at once.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest error ball that will be materialized.
    pub ball: u64,
    /// Largest number of ordered batches an exact-probability or
    /// adversarial-batch enumeration may visit.
    pub batches: u64,
    /// Largest number of completions of a partially-unknown word a
    /// decoder may try.
    pub completions: u64,
    /// Largest candidate space for the exhaustive maximum-code search.
    pub code_candidates: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            ball: 10_000_000,
            batches: 10_000_000,
            completions: 1_000_000,
            code_candidates: 1_000_000,
        }
    }
}

impl Caps {
    /// Default caps, with `RECONLAB_CAP` (if set and parseable as a
    /// positive integer) overriding every limit.
    pub fn from_env() -> Self {
        let mut caps = Caps::default();
        if let Ok(text) = std::env::var("RECONLAB_CAP") {
            if let Ok(value) = text.trim().parse::<u64>() {
                if value > 0 {
                    caps.ball = value;
                    caps.batches = value;
                    caps.completions = value;
                    caps.code_candidates = value;
                }
            }
        }
        caps
    }
}
