//! Seeded random patterns and systems for tests, benches and oracles.

use rand::Rng;

use crate::pattern::{Pattern, SwitchedSystem};

/// Each entry nonzero independently with probability `density`.
pub fn random_pattern<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, density: f64) -> Pattern {
    let entries: Vec<(usize, usize)> = (1..=rows)
        .flat_map(|r| (1..=cols).map(move |c| (r, c)))
        .filter(|_| rng.random_bool(density))
        .collect();
    Pattern::new(rows, cols, entries).expect("entries within shape")
}

/// `m` independent `n x n` state patterns without inputs.
pub fn random_system<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, density: f64) -> SwitchedSystem {
    let a = (0..m).map(|_| random_pattern(rng, n, n, density)).collect();
    SwitchedSystem::new(n, a, None).expect("square modes")
}
