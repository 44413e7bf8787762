//! Sparsest dedicated actuator placement and the solution families derived
//! from it.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{build_state_digraph, scc_decompose};
use crate::matching::{build_placement_bipartite, min_weight_max_matching, ColumnLabel};
use crate::pattern::{Pattern, SwitchedSystem};

/// Actuated state sets of a dedicated placement.
///
/// `J = j_prime ∪ j_dprime ∪ j_tprime` is the set of states that receive a
/// dedicated input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlacementSolution {
    pub n: usize,
    /// Rows matched through an indicator column: each raises the generic rank
    /// and feeds a distinct non-top-linked component.
    pub j_prime: BTreeSet<usize>,
    /// Rows left unmatched by the minimum-weight maximum matching.
    pub j_dprime: BTreeSet<usize>,
    /// One state per non-top-linked component not yet containing a state of
    /// `j_prime ∪ j_dprime`.
    pub j_tprime: BTreeSet<usize>,
    /// Non-top-linked component id -> the actuated state inside it.
    pub scc_cover: BTreeMap<usize, usize>,
}

impl PlacementSolution {
    /// `J' ∪ J'' ∪ J'''`.
    pub fn actuated(&self) -> BTreeSet<usize> {
        let mut all = self.rank_states();
        all.extend(&self.j_tprime);
        all
    }

    /// `J' ∪ J''`: the states whose inputs complete the generic rank.
    pub fn rank_states(&self) -> BTreeSet<usize> {
        self.j_prime.union(&self.j_dprime).copied().collect()
    }

    pub fn cardinality(&self) -> usize {
        self.actuated().len()
    }
}

/// Per-mode input patterns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeInputAssignment {
    pub modes: Vec<Pattern>,
}

impl ModeInputAssignment {
    pub fn total_nonzeros(&self) -> usize {
        self.modes.iter().map(Pattern::nnz).sum()
    }
}

/// Computes the minimum set of dedicated inputs (all placed in one mode) that
/// renders `system` structurally controllable.
///
/// Any input patterns already attached to `system` are ignored.
pub fn dedicated_placement(system: &SwitchedSystem) -> Result<PlacementSolution> {
    let n = system.n();
    let decomp = scc_decompose(&build_state_digraph(&system.a_union())?);
    let graph = build_placement_bipartite(system, &decomp)?;
    let matching = min_weight_max_matching(&graph);

    let mut j_prime = BTreeSet::new();
    let mut matched = BTreeSet::new();
    for &(left, row) in &matching.pairs {
        matched.insert(row);
        if let ColumnLabel::SColumn { .. } = graph.left_labels()[left - 1] {
            j_prime.insert(row);
        }
    }
    let j_dprime: BTreeSet<usize> = (1..=n).filter(|r| !matched.contains(r)).collect();

    let mut scc_cover = BTreeMap::new();
    for &state in j_prime.iter().chain(&j_dprime) {
        let comp = decomp.component_of_vertex(state);
        if decomp.is_non_top_linked(comp) {
            scc_cover
                .entry(comp)
                .and_modify(|s: &mut usize| *s = (*s).min(state))
                .or_insert(state);
        }
    }
    let mut j_tprime = BTreeSet::new();
    for &comp in &decomp.non_top_linked {
        if !scc_cover.contains_key(&comp) {
            let rep = decomp.components[comp][0];
            j_tprime.insert(rep);
            scc_cover.insert(comp, rep);
        }
    }

    Ok(PlacementSolution {
        n,
        j_prime,
        j_dprime,
        j_tprime,
        scc_cover,
    })
}

/// `(D(J), 0, ..., 0)` over `mode_count` modes.
pub fn dedicated_b(sol: &PlacementSolution, mode_count: usize) -> Result<ModeInputAssignment> {
    let actuated = sol.actuated();
    if actuated.is_empty() {
        return Err(Error::Argument("placement actuates no state".into()));
    }
    if mode_count == 0 {
        return Err(Error::Argument("mode count must be positive".into()));
    }
    let mut modes = vec![Pattern::zeros(sol.n, sol.n); mode_count];
    modes[0] = Pattern::diagonal(sol.n, actuated);
    Ok(ModeInputAssignment { modes })
}

/// `D(J' ∪ J'') ∨ O(J''')`: each `J'''` row gets its single nonzero in the
/// column chosen by `column_choice`.
pub fn non_dedicated_b(
    sol: &PlacementSolution,
    column_choice: &BTreeMap<usize, usize>,
) -> Result<Pattern> {
    for (&state, &col) in column_choice {
        if !sol.j_tprime.contains(&state) {
            return Err(Error::Argument(format!(
                "state {state} is not in J''' = {:?}",
                sol.j_tprime
            )));
        }
        if col == 0 || col > sol.n {
            return Err(Error::Argument(format!(
                "column {col} for state {state} outside 1..={}",
                sol.n
            )));
        }
    }
    let mut out = Pattern::diagonal(sol.n, sol.rank_states());
    for &state in &sol.j_tprime {
        let col = column_choice.get(&state).ok_or_else(|| {
            Error::Argument(format!("no column chosen for J''' state {state}"))
        })?;
        out.insert(state, *col)?;
    }
    Ok(out)
}

/// Routes every `J'''` row to the smallest column of `J' ∪ J''`, so only
/// `|J' ∪ J''|` distinct inputs are used.
///
/// With `J' ∪ J''` empty the `J'''` rows stay on their own columns.
pub fn minimal_b(sol: &PlacementSolution) -> Pattern {
    let target = sol.rank_states().first().copied();
    let choice = sol
        .j_tprime
        .iter()
        .map(|&s| (s, target.unwrap_or(s)))
        .collect();
    non_dedicated_b(sol, &choice).expect("choice covers every J''' state")
}

/// Spreads the nonzero columns of `base` over the modes: `partition` lists
/// `(column, mode)` pairs, every nonzero column exactly once.
pub fn distribute(
    base: &Pattern,
    partition: &[(usize, usize)],
    mode_count: usize,
) -> Result<ModeInputAssignment> {
    let nonzero = base.nonzero_columns();
    let mut target: BTreeMap<usize, usize> = BTreeMap::new();
    for &(col, mode) in partition {
        if !nonzero.contains(&col) {
            return Err(Error::Argument(format!(
                "column {col} is not a nonzero column of the base pattern"
            )));
        }
        if mode == 0 || mode > mode_count {
            return Err(Error::Argument(format!(
                "mode {mode} for column {col} outside 1..={mode_count}"
            )));
        }
        if target.insert(col, mode).is_some() {
            return Err(Error::Argument(format!("column {col} assigned twice")));
        }
    }
    if let Some(missing) = nonzero.iter().find(|c| !target.contains_key(c)) {
        return Err(Error::Argument(format!("column {missing} is not assigned to a mode")));
    }
    let mut modes = vec![Pattern::zeros(base.rows(), base.cols()); mode_count];
    for (r, c) in base.iter() {
        modes[target[&c] - 1].insert(r, c)?;
    }
    Ok(ModeInputAssignment { modes })
}
