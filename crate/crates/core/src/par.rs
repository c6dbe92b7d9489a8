//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (the default) the work is spread over the rayon
//! pool; without it the same closures run on the calling thread. Every helper
//! splits its index range into fixed chunks and combines partial results in
//! chunk order, so the output does not depend on the number of workers.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Number of Monte-Carlo draws handled by one RNG stream.
pub const CHUNK: usize = 4096;

/// SplitMix64 finalizer applied to `seed ^ stream`, used to derive
/// independent RNG streams from a user seed.
pub fn mix(seed: u64, stream: u64) -> u64 {
    let mut z = seed
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(stream.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// RNG for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(seed, stream))
}

/// Maps `f` over `0..n`, in parallel when enabled. Order is preserved.
pub fn map_indices<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_indices_seq(n, f)
    }
}

/// Sequential twin of [`map_indices`]; always compiled so benches can compare.
pub fn map_indices_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// Splits `0..n` into [`CHUNK`]-sized ranges and evaluates `f(chunk_index, range)`
/// for each. Results come back in chunk order.
pub fn map_chunks<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, std::ops::Range<usize>) -> T + Sync + Send,
{
    let chunks = n.div_ceil(CHUNK);
    map_indices(chunks, |j| f(j, j * CHUNK..((j + 1) * CHUNK).min(n)))
}

pub fn map_chunks_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize, std::ops::Range<usize>) -> T,
{
    let chunks = n.div_ceil(CHUNK);
    map_indices_seq(chunks, |j| f(j, j * CHUNK..((j + 1) * CHUNK).min(n)))
}

/// Row-wise maximum of a function over a point set, reduced in index order.
pub fn max_over<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    map_chunks(n, |_, range| range.map(&f).fold(0.0f64, f64::max))
        .into_iter()
        .fold(0.0, f64::max)
}
