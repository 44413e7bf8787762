//! Minimum number of modes a switching signal must visit to keep a
//! structurally controllable system controllable. NP-hard in general (it
//! embeds set cover), so there is an exact exponential search and a greedy
//! heuristic without approximation guarantee.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{accessible_set, build_state_digraph};
use crate::matching::generic_rank;
use crate::pattern::{concat, Pattern, SwitchedSystem};
use crate::verification::check_structural_controllability;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectionMethod {
    Exact,
    Greedy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModeSubsetResult {
    /// Selected 1-based mode indices.
    pub modes: BTreeSet<usize>,
    pub size: usize,
    pub method: SelectionMethod,
    pub feasible: bool,
}

/// Sub-system made of the given modes, kept in ascending original order.
pub fn restrict(system: &SwitchedSystem, modes: &BTreeSet<usize>) -> Result<SwitchedSystem> {
    if modes.is_empty() {
        return Err(Error::Argument("mode subset is empty".into()));
    }
    let m = system.mode_count();
    if let Some(bad) = modes.iter().find(|&&k| k == 0 || k > m) {
        return Err(Error::Argument(format!("mode {bad} outside 1..={m}")));
    }
    let a = modes.iter().map(|&k| system.a_modes()[k - 1].clone()).collect();
    let b = system
        .b_modes()
        .map(|bs| modes.iter().map(|&k| bs[k - 1].clone()).collect());
    SwitchedSystem::new(system.n(), a, b)
}

fn feasible(system: &SwitchedSystem, modes: &BTreeSet<usize>) -> Result<bool> {
    Ok(check_structural_controllability(&restrict(system, modes)?)?.overall)
}

fn require_controllable(system: &SwitchedSystem) -> Result<()> {
    let all: BTreeSet<usize> = (1..=system.mode_count()).collect();
    if feasible(system, &all)? {
        Ok(())
    } else {
        Err(Error::Infeasible(
            "the system is not structurally controllable even with every mode".into(),
        ))
    }
}

/// Smallest feasible mode subset by exhaustive search: subsets by ascending
/// size, lexicographic within a size.
pub fn min_modes_exact(system: &SwitchedSystem) -> Result<ModeSubsetResult> {
    require_controllable(system)?;
    let m = system.mode_count();
    for k in 1..=m {
        for subset in (1..=m).combinations(k) {
            let subset: BTreeSet<usize> = subset.into_iter().collect();
            if feasible(system, &subset)? {
                return Ok(ModeSubsetResult {
                    modes: subset,
                    size: k,
                    method: SelectionMethod::Exact,
                    feasible: true,
                });
            }
        }
    }
    unreachable!("the full mode set was checked feasible")
}

/// Accessible-state count plus generic rank of `[A_k.., B_k..]` over `modes`.
fn greedy_score(system: &SwitchedSystem, modes: &BTreeSet<usize>) -> Result<usize> {
    if modes.is_empty() {
        return Ok(0);
    }
    let sub = restrict(system, modes)?;
    let reach = accessible_set(&build_state_digraph(&sub.a_union())?, &sub.b_union())?;
    let mut blocks: Vec<Pattern> = sub.a_modes().to_vec();
    blocks.extend(sub.inputs_or_zero());
    Ok(reach.len() + generic_rank(&concat(&blocks)?))
}

/// Starts from the modes carrying inputs and repeatedly adds the mode with
/// the largest gain in (accessible states + matching size), lowest index on
/// ties, until the restriction is structurally controllable.
pub fn min_modes_greedy(system: &SwitchedSystem) -> Result<ModeSubsetResult> {
    require_controllable(system)?;
    let m = system.mode_count();
    let mut chosen: BTreeSet<usize> = system
        .b_modes()
        .map(|bs| {
            bs.iter()
                .enumerate()
                .filter(|(_, b)| !b.is_zero())
                .map(|(k, _)| k + 1)
                .collect()
        })
        .unwrap_or_default();

    while chosen.is_empty() || !feasible(system, &chosen)? {
        let current = greedy_score(system, &chosen)?;
        let mut best: Option<(usize, usize)> = None;
        for k in (1..=m).filter(|k| !chosen.contains(k)) {
            let mut candidate = chosen.clone();
            candidate.insert(k);
            let gain = greedy_score(system, &candidate)? - current;
            if best.is_none_or(|(_, g)| gain > g) {
                best = Some((k, gain));
            }
        }
        let (k, _) = best.expect("an infeasible proper subset leaves a mode to add");
        chosen.insert(k);
    }
    Ok(ModeSubsetResult {
        size: chosen.len(),
        modes: chosen,
        method: SelectionMethod::Greedy,
        feasible: true,
    })
}

/// Mode-selection instance encoding set cover over `1..=universe`.
///
/// States `x_1 .. x_{universe+1}` lie on the path `x_1 -> x_2 -> ...`, whose
/// edge `e_i : x_i -> x_{i+1}` belongs to mode `k` iff `i ∈ subsets[k-1]`.
/// Every mode has all self-loops; only mode 1 has an input, on `x_1`.
pub fn make_setcover_instance(
    universe: usize,
    subsets: &[BTreeSet<usize>],
) -> Result<SwitchedSystem> {
    if universe == 0 || subsets.is_empty() {
        return Err(Error::Argument("empty universe or subset list".into()));
    }
    let mut covered: BTreeSet<usize> = BTreeSet::new();
    for (k, s) in subsets.iter().enumerate() {
        if let Some(bad) = s.iter().find(|&&e| e == 0 || e > universe) {
            return Err(Error::Argument(format!(
                "subset {} has element {bad} outside 1..={universe}",
                k + 1
            )));
        }
        covered.extend(s);
    }
    if covered.len() != universe {
        return Err(Error::Argument(
            "subsets do not cover the universe".into(),
        ));
    }
    let n = universe + 1;
    let a = subsets
        .iter()
        .map(|s| {
            let mut p = Pattern::identity(n);
            for &i in s {
                // e_i : x_i -> x_{i+1}, i.e. entry (i+1, i)
                p.insert(i + 1, i).expect("edge within the path");
            }
            p
        })
        .collect::<Vec<_>>();
    let mut b = vec![Pattern::zeros(n, n); subsets.len()];
    b[0] = Pattern::diagonal(n, [1]);
    SwitchedSystem::new(n, a, Some(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_system() -> SwitchedSystem {
        SwitchedSystem::from_json(r#"{"n":4,"modes":[{"A":[[1,2]]},{"A":[[3,2]]},{"A":[[4,4]]}]}"#)
            .unwrap()
    }

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    fn actuated_example() -> SwitchedSystem {
        let s = example_system();
        let mut b = vec![Pattern::zeros(4, 4); 3];
        b[0] = Pattern::diagonal(4, [2, 4]);
        s.with_inputs(b).unwrap()
    }

    #[test]
    fn restrict_projects_modes() {
        let s = example_system();
        let r = restrict(&s, &set(&[1, 3])).unwrap();
        assert_eq!(r.a_modes(), &[s.a_modes()[0].clone(), s.a_modes()[2].clone()]);
        assert_eq!(restrict(&s, &set(&[1, 2, 3])).unwrap(), s);
        let r = restrict(&s, &set(&[2])).unwrap();
        assert_eq!(r.a_modes(), &[Pattern::new(4, 4, [(3, 2)]).unwrap()]);
        assert!(restrict(&s, &set(&[])).is_err());
        assert!(restrict(&s, &set(&[4])).is_err());
        assert!(restrict(&s, &set(&[0])).is_err());
    }

    #[test]
    fn exact_on_example() {
        let r = min_modes_exact(&actuated_example()).unwrap();
        assert_eq!(r.modes, set(&[1, 2]));
        assert_eq!(r.size, 2);
        assert!(r.feasible);
    }

    #[test]
    fn infeasible_system_is_rejected() {
        assert!(matches!(min_modes_exact(&example_system()), Err(Error::Infeasible(_))));
        assert!(matches!(min_modes_greedy(&example_system()), Err(Error::Infeasible(_))));
    }

    #[test]
    fn single_mode_systems() {
        let s = SwitchedSystem::new(2, vec![Pattern::identity(2)], Some(vec![Pattern::identity(2)])).unwrap();
        assert_eq!(min_modes_exact(&s).unwrap().size, 1);
        // one mode holds all structure
        let s = SwitchedSystem::new(
            2,
            vec![Pattern::new(2, 2, [(2, 1), (1, 1)]).unwrap(), Pattern::zeros(2, 2)],
            Some(vec![Pattern::diagonal(2, [1]), Pattern::zeros(2, 2)]),
        )
        .unwrap();
        assert_eq!(min_modes_greedy(&s).unwrap().modes, set(&[1]));
        assert_eq!(min_modes_exact(&s).unwrap().modes, set(&[1]));
    }

    #[test]
    fn setcover_instance_shape() {
        let s = make_setcover_instance(2, &[set(&[1]), set(&[2]), set(&[1, 2])]).unwrap();
        assert_eq!((s.n(), s.mode_count()), (3, 3));
        assert_eq!(s.a_modes()[0], Pattern::new(3, 3, [(1, 1), (2, 2), (3, 3), (2, 1)]).unwrap());
        assert_eq!(s.a_modes()[1], Pattern::new(3, 3, [(1, 1), (2, 2), (3, 3), (3, 2)]).unwrap());
        assert_eq!(s.b_modes().unwrap()[0], Pattern::diagonal(3, [1]));
        assert!(s.b_modes().unwrap()[1..].iter().all(Pattern::is_zero));

        let exact = min_modes_exact(&s).unwrap();
        assert_eq!((exact.size, exact.modes.clone()), (2, set(&[1, 2])));
        let greedy = min_modes_greedy(&s).unwrap();
        assert_eq!(greedy.size, 2);
        assert!(greedy.modes.contains(&1));
    }

    #[test]
    fn setcover_trivial_instances() {
        let s = make_setcover_instance(3, &[set(&[1, 2, 3]), set(&[2])]).unwrap();
        assert_eq!(min_modes_exact(&s).unwrap().modes, set(&[1]));
        let s = make_setcover_instance(1, &[set(&[1])]).unwrap();
        assert_eq!(s.n(), 2);
        assert_eq!(min_modes_exact(&s).unwrap().size, 1);
    }

    #[test]
    fn greedy_never_beats_exact() {
        // mode 1 carries the input but no edge
        let s = make_setcover_instance(
            6,
            &[set(&[]), set(&[1, 2, 3]), set(&[4, 5, 6]), set(&[1, 2, 4, 5])],
        );
        assert!(s.is_ok());
        let s = s.unwrap();
        let exact = min_modes_exact(&s).unwrap();
        let greedy = min_modes_greedy(&s).unwrap();
        assert_eq!(exact.modes, set(&[1, 2, 3]));
        assert!(greedy.size >= exact.size);
        assert!(check_structural_controllability(&restrict(&s, &greedy.modes).unwrap()).unwrap().overall);
    }

    #[test]
    fn setcover_rejects_bad_input() {
        assert!(make_setcover_instance(3, &[set(&[1, 2])]).is_err());
        assert!(make_setcover_instance(2, &[set(&[1, 3])]).is_err());
        assert!(make_setcover_instance(0, &[set(&[])]).is_err());
    }
}
