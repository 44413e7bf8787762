//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use structctl_core::random::random_system;
use structctl_core::{Pattern, SwitchedSystem, WeightedBipartite};

pub const EXAMPLE_JSON: &str = r#"{"n":4,"modes":[{"A":[[1,2]]},{"A":[[3,2]]},{"A":[[4,4]]}]}"#;

/// Three modes on four states with single nonzeros at (1,2), (3,2), (4,4).
pub fn example_system() -> SwitchedSystem {
    SwitchedSystem::from_json(EXAMPLE_JSON).unwrap()
}

/// One mode whose dynamics is the union of the example's modes.
pub fn merged_example() -> SwitchedSystem {
    let s = example_system();
    SwitchedSystem::new(4, vec![s.a_union()], None).unwrap()
}

pub fn set(xs: &[usize]) -> BTreeSet<usize> {
    xs.iter().copied().collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Attaches `b` to mode 1 and zeros elsewhere.
pub fn with_mode1(system: &SwitchedSystem, b: Pattern) -> SwitchedSystem {
    let mut inputs = vec![Pattern::zeros(system.n(), system.n()); system.mode_count()];
    inputs[0] = b;
    system.with_inputs(inputs).unwrap()
}

/// Random system with `n` in `n_range`, `m` in `1..=max_m`, density in [0.1, 0.4].
pub fn draw_system(
    rng: &mut ChaCha8Rng,
    n_range: std::ops::RangeInclusive<usize>,
    max_m: usize,
) -> SwitchedSystem {
    let n = rng.random_range(n_range);
    let m = rng.random_range(1..=max_m);
    let density = rng.random_range(0.1..=0.4);
    random_system(rng, n, m, density)
}

/// Best `(cardinality, weight)` over every matching, by explicit enumeration:
/// each left vertex is either skipped or paired with a free neighbour.
pub fn enumerate_best_matching(g: &WeightedBipartite) -> (usize, u64) {
    fn go(
        l: usize,
        adj: &[Vec<(usize, u8)>],
        used: &mut [bool],
        card: usize,
        weight: u64,
        best: &mut (usize, u64),
    ) {
        if l == adj.len() {
            if card > best.0 || (card == best.0 && weight < best.1) {
                *best = (card, weight);
            }
            return;
        }
        go(l + 1, adj, used, card, weight, best);
        for &(r, w) in &adj[l] {
            if !used[r] {
                used[r] = true;
                go(l + 1, adj, used, card + 1, weight + u64::from(w), best);
                used[r] = false;
            }
        }
    }
    let mut adj = vec![Vec::new(); g.left_count()];
    for (l, r, w) in g.edges() {
        adj[l - 1].push((r - 1, w));
    }
    let mut best = (0, 0);
    go(0, &adj, &mut vec![false; g.right_count()], 0, 0, &mut best);
    best
}

/// Random bipartite graph with 1..=8 vertices per side and random 0/1 weights.
pub fn draw_bipartite(rng: &mut ChaCha8Rng) -> WeightedBipartite {
    let left = rng.random_range(1..=8);
    let right = rng.random_range(1..=8);
    let density = rng.random_range(0.1..=0.7);
    let mut edges = Vec::new();
    for l in 1..=left {
        for r in 1..=right {
            if rng.random_bool(density) {
                edges.push((l, r, rng.random_range(0..=1u8)));
            }
        }
    }
    WeightedBipartite::plain(left, right, edges).unwrap()
}

/// Random set-cover family over `1..=universe`; every element is covered.
pub fn draw_setcover(rng: &mut ChaCha8Rng, universe: usize, count: usize) -> Vec<BTreeSet<usize>> {
    let mut subsets: Vec<BTreeSet<usize>> = (0..count)
        .map(|_| (1..=universe).filter(|_| rng.random_bool(0.35)).collect())
        .collect();
    for e in 1..=universe {
        if !subsets.iter().any(|s| s.contains(&e)) {
            let k = rng.random_range(0..count);
            subsets[k].insert(e);
        }
    }
    subsets
}

/// Fewest subsets covering the universe when subset 1 (the one whose mode
/// carries the input) is always taken. Counts subset 1.
pub fn setcover_optimum_with_first(universe: usize, subsets: &[BTreeSet<usize>]) -> usize {
    let m = subsets.len();
    let mut best = usize::MAX;
    for mask in 0u32..(1 << m) {
        if mask & 1 == 0 {
            continue;
        }
        let covered: BTreeSet<usize> = (0..m)
            .filter(|k| mask >> k & 1 == 1)
            .flat_map(|k| subsets[k].iter().copied())
            .collect();
        if covered.len() == universe {
            best = best.min(mask.count_ones() as usize);
        }
    }
    best
}
