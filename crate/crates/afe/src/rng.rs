//! Derived RNG streams for reproducible, thread-count-independent runs.
//!
//! Every stochastic step in the crate draws from its own stream, seeded by
//! mixing a master seed with a component label and an index. Work units can
//! then run in any order (or in parallel) without changing what any unit
//! draws.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stable 64-bit mix of (master seed, component label, index).
///
/// FNV-1a over the label folded through SplitMix64 finalizers; fixed for the
/// life of the crate so recorded seeds stay meaningful across versions.
pub fn derive_seed(master: u64, component: &str, index: u64) -> u64 {
    const FNV_OFFSET: u64 = 0xcbf29ce484222325;
    const FNV_PRIME: u64 = 0x00000100000001b3;
    let mut h = FNV_OFFSET;
    for b in component.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    splitmix64(splitmix64(master ^ h).wrapping_add(index))
}

/// Seeded stream for one work unit.
pub fn stream(master: u64, component: &str, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, component, index))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Fisher-Yates shuffle driven by an explicit stream.
pub fn shuffle<T>(items: &mut [T], rng: &mut ChaCha8Rng) {
    use rand::Rng;
    for i in (1..items.len()).rev() {
        let j = rng.gen_range(0..=i);
        items.swap(i, j);
    }
}

/// Sample `k` distinct indices from `0..n` (k <= n), in draw order.
pub fn sample_indices(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    assert!(k <= n, "cannot sample {k} of {n}");
    let mut pool: Vec<usize> = (0..n).collect();
    shuffle(&mut pool, rng);
    pool.truncate(k);
    pool
}
