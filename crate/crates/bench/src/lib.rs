//! Fixtures shared by the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use structctl_core::random::random_system;
use structctl_core::SwitchedSystem;

/// Seeded random system; same arguments, same system.
pub fn fixture(n: usize, m: usize, density: f64, seed: u64) -> SwitchedSystem {
    random_system(&mut ChaCha8Rng::seed_from_u64(seed), n, m, density)
}
