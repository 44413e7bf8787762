//! Structural controllability checks and independent oracles: a randomized
//! numeric rank test on the switched controllability matrix, and an
//! exhaustive search for the smallest dedicated input set.

use std::collections::BTreeSet;

use itertools::Itertools;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{build_state_digraph, condition_i_holds, scc_decompose};
use crate::matching::generic_rank;
use crate::pattern::{concat, Pattern, SwitchedSystem};

/// Accessibility half of the report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AccessibilityReport {
    pub pass: bool,
    /// Member states of every non-top-linked component without an input.
    pub uncovered: Vec<Vec<usize>>,
}

/// Rank half of the report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub pass: bool,
    pub matching_size: usize,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub condition_i: AccessibilityReport,
    pub condition_ii: RankReport,
    pub overall: bool,
}

/// Checks both graph conditions for structural controllability: every
/// non-top-linked SCC of the union digraph holds an actuated state, and
/// `[A_1, ..., A_m, B_1, ..., B_m]` has a matching of size `n`.
///
/// Missing input patterns count as zero.
pub fn check_structural_controllability(system: &SwitchedSystem) -> Result<VerificationReport> {
    let n = system.n();
    let decomp = scc_decompose(&build_state_digraph(&system.a_union())?);
    let access = condition_i_holds(&decomp, &system.b_union())?;

    let mut blocks = system.a_modes().to_vec();
    blocks.extend(system.inputs_or_zero());
    let matching_size = generic_rank(&concat(&blocks)?);

    let condition_i = AccessibilityReport {
        pass: access.pass,
        uncovered: access
            .uncovered
            .iter()
            .map(|&c| decomp.components[c].clone())
            .collect(),
    };
    let condition_ii = RankReport {
        pass: matching_size == n,
        matching_size,
        target: n,
    };
    Ok(VerificationReport {
        overall: condition_i.pass && condition_ii.pass,
        condition_i,
        condition_ii,
    })
}

/// Real matrices realizing the patterns of a switched system.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericSystem {
    pub a: Vec<DMatrix<f64>>,
    pub b: Vec<DMatrix<f64>>,
    pub seed: u64,
}

impl NumericSystem {
    pub fn n(&self) -> usize {
        self.a[0].nrows()
    }

    pub fn mode_count(&self) -> usize {
        self.a.len()
    }

    pub fn nonzero_count(&self) -> usize {
        self.a
            .iter()
            .chain(&self.b)
            .map(|m| m.iter().filter(|x| **x != 0.0).count())
            .sum()
    }
}

pub const DEFAULT_RANGE: (f64, f64) = (0.5, 1.5);
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

fn fill(p: &Pattern, rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(p.rows(), p.cols());
    for (r, c) in p.iter() {
        m[(r - 1, c - 1)] = rng.random_range(lo..=hi);
    }
    m
}

/// Draws every pattern nonzero i.i.d. uniform from `range`, which must not
/// contain zero. Deterministic per seed.
pub fn realize(system: &SwitchedSystem, seed: u64, range: (f64, f64)) -> Result<NumericSystem> {
    let (lo, hi) = range;
    if !(lo.is_finite() && hi.is_finite()) || lo > hi || (lo <= 0.0 && hi >= 0.0) {
        return Err(Error::Argument(format!(
            "realization range [{lo}, {hi}] must be a finite interval excluding zero"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = system
        .a_modes()
        .iter()
        .map(|p| fill(p, &mut rng, lo, hi))
        .collect();
    let b = system
        .inputs_or_zero()
        .iter()
        .map(|p| fill(p, &mut rng, lo, hi))
        .collect();
    Ok(NumericSystem { a, b, seed })
}

/// Size caps for the switched controllability matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CtrbLimits {
    pub max_n: usize,
    pub max_modes: usize,
}

impl Default for CtrbLimits {
    fn default() -> Self {
        CtrbLimits {
            max_n: 8,
            max_modes: 4,
        }
    }
}

/// `(Σ_{l=0}^{n-1} m^l) · Σ_j p_j`.
pub fn ctrb_column_count(n: usize, m: usize, input_cols: usize) -> u128 {
    let words: u128 = (0..n as u32).map(|l| (m as u128).pow(l)).sum();
    words * input_cols as u128
}

pub fn switched_ctrb_matrix(num: &NumericSystem) -> Result<DMatrix<f64>> {
    switched_ctrb_matrix_with_limits(num, CtrbLimits::default())
}

/// Columns `A_{i_l} ··· A_{i_1} B_j` for every mode word `(i_1, ..., i_l)` of
/// length `0..n`, ordered by length, then lexicographically, then by `j`.
pub fn switched_ctrb_matrix_with_limits(
    num: &NumericSystem,
    limits: CtrbLimits,
) -> Result<DMatrix<f64>> {
    let n = num.n();
    let m = num.mode_count();
    let input_cols: usize = num.b.iter().map(|b| b.ncols()).sum();
    let columns = ctrb_column_count(n, m, input_cols);
    if n > limits.max_n || m > limits.max_modes {
        return Err(Error::Resource {
            columns,
            detail: format!(
                "n = {n} (cap {}), modes = {m} (cap {})",
                limits.max_n, limits.max_modes
            ),
        });
    }
    let b_all = DMatrix::from_fn(n, input_cols, {
        let offsets: Vec<(usize, usize)> = num
            .b
            .iter()
            .enumerate()
            .flat_map(|(j, b)| (0..b.ncols()).map(move |c| (j, c)))
            .collect();
        move |r, k| {
            let (j, c) = offsets[k];
            num.b[j][(r, c)]
        }
    });

    let mut blocks: Vec<DMatrix<f64>> = vec![b_all];
    let mut frontier = blocks.clone();
    for _ in 1..n {
        // Extending each word in lex order by every mode keeps lex order.
        frontier = frontier
            .iter()
            .flat_map(|w| num.a.iter().map(move |a| a * w))
            .collect();
        blocks.extend(frontier.iter().cloned());
    }
    let mut out = DMatrix::zeros(n, columns as usize);
    for (k, block) in blocks.iter().enumerate() {
        out.columns_mut(k * input_cols, input_cols).copy_from(block);
    }
    Ok(out)
}

/// Numerical rank: singular values above `tol · σ_max`.
pub fn numeric_rank(m: &DMatrix<f64>, tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    // The singular values of a wide matrix equal those of its transpose.
    let sv = if m.nrows() < m.ncols() {
        m.transpose().singular_values()
    } else {
        m.singular_values()
    };
    let max = sv.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * max).count()
}

pub fn numeric_controllable(num: &NumericSystem, tol: f64) -> Result<bool> {
    numeric_controllable_with_limits(num, tol, CtrbLimits::default())
}

pub fn numeric_controllable_with_limits(
    num: &NumericSystem,
    tol: f64,
    limits: CtrbLimits,
) -> Result<bool> {
    let c = switched_ctrb_matrix_with_limits(num, limits)?;
    Ok(numeric_rank(&c, tol) == num.n())
}

/// Smallest dedicated input set, placed in mode 1, that passes
/// [`check_structural_controllability`]. Candidate sets are tried by
/// ascending size, lexicographically within a size; exponential in `n`.
pub fn brute_force_min_dedicated(system: &SwitchedSystem) -> Result<(usize, BTreeSet<usize>)> {
    let n = system.n();
    let m = system.mode_count();
    for k in 0..=n {
        for subset in (1..=n).combinations(k) {
            let mut inputs = vec![Pattern::zeros(n, n); m];
            inputs[0] = Pattern::diagonal(n, subset.iter().copied());
            if check_structural_controllability(&system.with_inputs(inputs)?)?.overall {
                return Ok((k, subset.into_iter().collect()));
            }
        }
    }
    unreachable!("actuating every state is always structurally controllable")
}
