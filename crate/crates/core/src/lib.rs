//! Sparsest actuator placement for structural controllability of switched
//! linear continuous-time systems `ẋ = A_σ(t) x + B_σ(t) u`.
//!
//! Systems are described only by their zero patterns. [`placement`] finds the
//! minimum set of dedicated inputs through a minimum-weight maximum matching,
//! and derives the non-dedicated, minimal-actuator and mode-distributed
//! solutions from it. [`verification`] checks results graph-theoretically and
//! with a randomized numeric rank test; [`modes`] solves the minimum
//! mode-subset problem.

pub mod error;
pub mod graph;
pub mod matching;
pub mod modes;
pub mod pattern;
pub mod placement;
pub mod random;
pub mod verification;

pub use error::{Error, Result};
pub use graph::{
    accessible_set, build_state_digraph, condition_i_holds, scc_decompose, to_dot,
    AccessibilityCheck, Digraph, SccDecomposition,
};
pub use matching::{
    build_placement_bipartite, generic_rank, max_matching, min_weight_max_matching, ColumnLabel,
    Matching, WeightedBipartite,
};
pub use modes::{
    make_setcover_instance, min_modes_exact, min_modes_greedy, restrict, ModeSubsetResult,
    SelectionMethod,
};
pub use pattern::{concat, parse_system, serialize_system, union, Pattern, SwitchedSystem};
pub use placement::{
    dedicated_b, dedicated_placement, distribute, minimal_b, non_dedicated_b, ModeInputAssignment,
    PlacementSolution,
};
pub use verification::{
    brute_force_min_dedicated, check_structural_controllability, numeric_controllable, realize,
    switched_ctrb_matrix, NumericSystem, VerificationReport,
};
