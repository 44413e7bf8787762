//! Bipartite matchings: maximum cardinality (Hopcroft-Karp), minimum-weight
//! maximum matching (Hungarian method with a cardinality penalty), generic rank,
//! and the weighted placement graph `B([A_1, ..., A_m, S])`.
//!
//! Left vertices are matrix columns, right vertices are matrix rows. Both are
//! indexed from 1.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::SccDecomposition;
use crate::pattern::{Pattern, SwitchedSystem};

/// What a left (column) vertex stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ColumnLabel {
    /// Column `column` of the state pattern of mode `mode`; edges weigh 0.
    AColumn { mode: usize, column: usize },
    /// Indicator column of the `scc`-th non-top-linked component; edges weigh 1.
    SColumn { scc: usize },
    /// Unlabelled column of a general graph; edges weigh 0 or 1.
    Plain(usize),
}

impl fmt::Display for ColumnLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnLabel::AColumn { mode, column } => write!(f, "c{column}^{mode}"),
            ColumnLabel::SColumn { scc } => write!(f, "s{scc}"),
            ColumnLabel::Plain(j) => write!(f, "c{j}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedBipartite {
    left_labels: Vec<ColumnLabel>,
    right_count: usize,
    /// `(left, right) -> weight`, weight in {0, 1}.
    edges: BTreeMap<(usize, usize), u8>,
}

impl WeightedBipartite {
    pub fn new(
        left_labels: Vec<ColumnLabel>,
        right_count: usize,
        edges: impl IntoIterator<Item = (usize, usize, u8)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (l, r, w) in edges {
            if l == 0 || l > left_labels.len() || r == 0 || r > right_count {
                return Err(Error::Argument(format!(
                    "edge ({l},{r}) outside {}x{right_count} bipartite graph",
                    left_labels.len()
                )));
            }
            if w > 1 {
                return Err(Error::Argument(format!("edge weight {w} is not 0 or 1")));
            }
            let expected = match left_labels[l - 1] {
                ColumnLabel::AColumn { .. } => Some(0),
                ColumnLabel::SColumn { .. } => Some(1),
                ColumnLabel::Plain(_) => None,
            };
            if expected.is_some_and(|e| e != w) {
                return Err(Error::Argument(format!(
                    "edge ({},{r}) has weight {w}, label requires {}",
                    left_labels[l - 1],
                    expected.unwrap()
                )));
            }
            map.insert((l, r), w);
        }
        Ok(WeightedBipartite {
            left_labels,
            right_count,
            edges: map,
        })
    }

    /// General graph with `Plain` left labels.
    pub fn plain(
        left_count: usize,
        right_count: usize,
        edges: impl IntoIterator<Item = (usize, usize, u8)>,
    ) -> Result<Self> {
        Self::new(
            (1..=left_count).map(ColumnLabel::Plain).collect(),
            right_count,
            edges,
        )
    }

    pub fn left_labels(&self) -> &[ColumnLabel] {
        &self.left_labels
    }

    pub fn left_count(&self) -> usize {
        self.left_labels.len()
    }

    pub fn right_count(&self) -> usize {
        self.right_count
    }

    /// Edges with weights, sorted by `(left, right)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u8)> + '_ {
        self.edges.iter().map(|(&(l, r), &w)| (l, r, w))
    }

    pub fn weight(&self, left: usize, right: usize) -> Option<u8> {
        self.edges.get(&(left, right)).copied()
    }

    /// 0-based right neighbours of each left vertex, ascending.
    fn left_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.left_labels.len()];
        for &(l, r) in self.edges.keys() {
            adj[l - 1].push(r - 1);
        }
        adj
    }

    fn matching_from_pairs(&self, pairs: BTreeSet<(usize, usize)>) -> Matching {
        let total_weight = pairs
            .iter()
            .map(|p| u64::from(self.edges[p]))
            .sum();
        Matching {
            pairs,
            total_weight,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Matching {
    /// `(left, right)` pairs.
    pub pairs: BTreeSet<(usize, usize)>,
    pub total_weight: u64,
}

impl Matching {
    pub fn cardinality(&self) -> usize {
        self.pairs.len()
    }

    pub fn matched_rights(&self) -> BTreeSet<usize> {
        self.pairs.iter().map(|&(_, r)| r).collect()
    }

    pub fn partner_of_right(&self, right: usize) -> Option<usize> {
        self.pairs.iter().find(|&&(_, r)| r == right).map(|&(l, _)| l)
    }
}

/// Hopcroft-Karp on 0-based adjacency. Returns the partner of each left vertex.
fn hopcroft_karp(adj: &[Vec<usize>], right_count: usize) -> Vec<Option<usize>> {
    const INF: usize = usize::MAX;
    let left_count = adj.len();
    let mut match_left: Vec<Option<usize>> = vec![None; left_count];
    let mut match_right: Vec<Option<usize>> = vec![None; right_count];
    let mut dist = vec![INF; left_count];

    loop {
        // BFS layering from free left vertices.
        let mut queue = VecDeque::new();
        for l in 0..left_count {
            if match_left[l].is_none() {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = INF;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                match match_right[r] {
                    None => found = true,
                    Some(l2) if dist[l2] == INF => {
                        dist[l2] = dist[l] + 1;
                        queue.push_back(l2);
                    }
                    Some(_) => {}
                }
            }
        }
        if !found {
            break;
        }

        // Iterative DFS along the layers.
        let mut next = vec![0usize; left_count];
        for root in 0..left_count {
            if match_left[root].is_some() {
                continue;
            }
            let mut path: Vec<usize> = vec![root];
            while let Some(&l) = path.last() {
                let mut advanced = false;
                while next[l] < adj[l].len() {
                    let r = adj[l][next[l]];
                    next[l] += 1;
                    match match_right[r] {
                        None => {
                            // Augment along the path, last edge first.
                            let mut r = r;
                            while let Some(l) = path.pop() {
                                let prev = match_left[l];
                                match_left[l] = Some(r);
                                match_right[r] = Some(l);
                                match prev {
                                    Some(p) => r = p,
                                    None => break,
                                }
                            }
                            path.clear();
                            advanced = true;
                            break;
                        }
                        Some(l2) if dist[l2] == dist[l] + 1 => {
                            path.push(l2);
                            advanced = true;
                            break;
                        }
                        Some(_) => {}
                    }
                }
                if !advanced {
                    dist[l] = INF;
                    path.pop();
                }
            }
        }
    }
    match_left
}

/// Maximum-cardinality matching; weights are ignored (but reported).
pub fn max_matching(g: &WeightedBipartite) -> Matching {
    let partner = hopcroft_karp(&g.left_adjacency(), g.right_count);
    let pairs = partner
        .iter()
        .enumerate()
        .filter_map(|(l, r)| r.map(|r| (l + 1, r + 1)))
        .collect();
    g.matching_from_pairs(pairs)
}

/// Maximum matching of least total weight.
///
/// Solved as one rectangular assignment: every right vertex either takes an
/// edge at its weight or a private dummy column at penalty `C_big`, which
/// exceeds any attainable weight total so cardinality is maximised first.
/// Rows are inserted in ascending order and edge columns scanned in label
/// order. Dummy columns come after them in descending row order, so on ties
/// an earlier row keeps its match and the later row is left unmatched.
pub fn min_weight_max_matching(g: &WeightedBipartite) -> Matching {
    let rows = g.right_count;
    let left = g.left_labels.len();
    if rows == 0 || g.edges.is_empty() {
        return Matching::default();
    }
    let weighted_lefts = g
        .edges
        .iter()
        .filter(|(_, &w)| w > 0)
        .map(|(&(l, _), _)| l)
        .collect::<BTreeSet<_>>()
        .len();
    let big = (rows + weighted_lefts + 1) as i64;
    const FORBIDDEN: i64 = i64::MAX / 4;

    let cols = left + rows;
    // cost[i][j], 0-based row i and column j; column left + (rows - 1 - i)
    // is the dummy of row i.
    let mut cost = vec![FORBIDDEN; rows * cols];
    for (&(l, r), &w) in &g.edges {
        cost[(r - 1) * cols + (l - 1)] = i64::from(w);
    }
    for i in 0..rows {
        cost[i * cols + left + (rows - 1 - i)] = big;
    }

    let assigned = hungarian(rows, cols, &cost);
    let pairs = assigned
        .iter()
        .enumerate()
        .filter(|&(_, &j)| j < left)
        .map(|(i, &j)| (j + 1, i + 1))
        .collect();
    g.matching_from_pairs(pairs)
}

/// Shortest-augmenting-path Hungarian method for a `rows x cols` cost matrix
/// with `rows <= cols`. Returns the column assigned to each row.
fn hungarian(rows: usize, cols: usize, cost: &[i64]) -> Vec<usize> {
    const INF: i64 = i64::MAX;
    // 1-based internally; index 0 is the virtual source column.
    let mut u = vec![0i64; rows + 1];
    let mut v = vec![0i64; cols + 1];
    let mut owner = vec![0usize; cols + 1];
    let mut way = vec![0usize; cols + 1];
    let mut minv = vec![INF; cols + 1];
    let mut used = vec![false; cols + 1];

    for i in 1..=rows {
        owner[0] = i;
        let mut j0 = 0;
        minv.fill(INF);
        used.fill(false);
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let row = &cost[(i0 - 1) * cols..i0 * cols];
            let mut delta = INF;
            let mut j1 = 0;
            for j in 1..=cols {
                if used[j] {
                    continue;
                }
                let cur = row[j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=cols {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assigned = vec![0; rows];
    for j in 1..=cols {
        if owner[j] != 0 {
            assigned[owner[j] - 1] = j - 1;
        }
    }
    assigned
}

/// Generic rank of a pattern: the maximum matching size of its bipartite graph.
pub fn generic_rank(p: &Pattern) -> usize {
    hopcroft_karp(&p.column_lists(), p.rows())
        .iter()
        .filter(|m| m.is_some())
        .count()
}

/// Weighted bipartite graph of `[A_1, ..., A_m, S]`, where column `j` of `S`
/// marks the states of the `j`-th non-top-linked component of `decomp`.
pub fn build_placement_bipartite(
    system: &SwitchedSystem,
    decomp: &SccDecomposition,
) -> Result<WeightedBipartite> {
    let n = system.n();
    if decomp.component_of.len() != n {
        return Err(Error::Dimension(format!(
            "decomposition covers {} states, system has {n}",
            decomp.component_of.len()
        )));
    }
    let m = system.mode_count();
    let beta = decomp.non_top_linked.len();
    let mut labels = Vec::with_capacity(m * n + beta);
    for mode in 1..=m {
        labels.extend((1..=n).map(|column| ColumnLabel::AColumn { mode, column }));
    }
    labels.extend((1..=beta).map(|scc| ColumnLabel::SColumn { scc }));

    let mut edges = Vec::new();
    for (k, a) in system.a_modes().iter().enumerate() {
        edges.extend(a.iter().map(|(i, j)| (k * n + j, i, 0)));
    }
    for s in 1..=beta {
        edges.extend(
            decomp
                .non_top_linked_members(s)
                .iter()
                .map(|&i| (m * n + s, i, 1)),
        );
    }
    WeightedBipartite::new(labels, n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_state_digraph, scc_decompose};
    use crate::pattern::concat;
    use proptest::prelude::*;

    fn example_system() -> SwitchedSystem {
        SwitchedSystem::from_json(r#"{"n":4,"modes":[{"A":[[1,2]]},{"A":[[3,2]]},{"A":[[4,4]]}]}"#)
            .unwrap()
    }

    fn placement_graph(s: &SwitchedSystem) -> WeightedBipartite {
        let d = scc_decompose(&build_state_digraph(&s.a_union()).unwrap());
        build_placement_bipartite(s, &d).unwrap()
    }

    fn pattern_graph(p: &Pattern) -> WeightedBipartite {
        WeightedBipartite::plain(p.cols(), p.rows(), p.iter().map(|(r, c)| (c, r, 0))).unwrap()
    }

    /// Exhaustive best (cardinality, -weight) over all matchings, left vertex by left vertex.
    fn enumerate_best(g: &WeightedBipartite) -> (usize, u64) {
        fn go(
            l: usize,
            adj: &[Vec<(usize, u8)>],
            used: &mut Vec<bool>,
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

    #[test]
    fn example_concat_matching() {
        let s = example_system();
        let c = concat(s.a_modes()).unwrap();
        let g = pattern_graph(&c);
        let m = max_matching(&g);
        assert_eq!(m.cardinality(), 3);
        assert_eq!(m.matched_rights(), BTreeSet::from([1, 3, 4]));
        assert_eq!(enumerate_best(&g).0, 3);
        assert_eq!(generic_rank(&c), 3);
    }

    #[test]
    fn trivial_matchings() {
        let empty = WeightedBipartite::plain(3, 3, []).unwrap();
        assert_eq!(max_matching(&empty), Matching::default());
        assert_eq!(min_weight_max_matching(&empty), Matching::default());
        let full = WeightedBipartite::plain(
            3,
            3,
            (1..=3).flat_map(|l| (1..=3).map(move |r| (l, r, 0))),
        )
        .unwrap();
        assert_eq!(max_matching(&full).cardinality(), 3);
        let mw = min_weight_max_matching(&full);
        assert_eq!((mw.cardinality(), mw.total_weight), (3, 0));
    }

    #[test]
    fn generic_rank_basics() {
        assert_eq!(generic_rank(&Pattern::identity(5)), 5);
        assert_eq!(generic_rank(&Pattern::zeros(4, 3)), 0);
    }

    #[test]
    fn example_placement_graph() {
        let g = placement_graph(&example_system());
        assert_eq!(g.left_count(), 14);
        assert_eq!(g.left_labels()[1], ColumnLabel::AColumn { mode: 1, column: 2 });
        assert_eq!(g.left_labels()[12], ColumnLabel::SColumn { scc: 1 });
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(
            edges,
            vec![(2, 1, 0), (6, 3, 0), (12, 4, 0), (13, 2, 1), (14, 4, 1)]
        );
    }

    #[test]
    fn example_mwmm_uses_one_s_column() {
        let g = placement_graph(&example_system());
        let m = min_weight_max_matching(&g);
        assert_eq!(m.cardinality(), 4);
        assert_eq!(m.total_weight, 1);
        assert_eq!(m.partner_of_right(2), Some(13));
        assert_eq!(enumerate_best(&g), (4, 1));
    }

    #[test]
    fn merged_single_mode_mwmm() {
        let merged = SwitchedSystem::new(4, vec![example_system().a_union()], None).unwrap();
        let g = placement_graph(&merged);
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(edges, vec![(2, 1, 0), (2, 3, 0), (4, 4, 0), (5, 2, 1), (6, 4, 1)]);
        let m = min_weight_max_matching(&g);
        assert_eq!((m.cardinality(), m.total_weight), (3, 1));
        assert_eq!(enumerate_best(&g), (3, 1));
        assert_eq!(m.partner_of_right(1), Some(2));
        assert_eq!(m.partner_of_right(3), None);
    }

    #[test]
    fn tiny_placement_graphs() {
        let zero = SwitchedSystem::new(1, vec![Pattern::zeros(1, 1)], None).unwrap();
        let g = placement_graph(&zero);
        assert_eq!(g.left_labels(), &[ColumnLabel::AColumn { mode: 1, column: 1 }, ColumnLabel::SColumn { scc: 1 }]);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(2, 1, 1)]);

        let id = SwitchedSystem::new(2, vec![Pattern::identity(2)], None).unwrap();
        let g = placement_graph(&id);
        assert_eq!(
            g.edges().collect::<Vec<_>>(),
            vec![(1, 1, 0), (2, 2, 0), (3, 1, 1), (4, 2, 1)]
        );
    }

    #[test]
    fn label_weight_invariant_enforced() {
        let labels = vec![ColumnLabel::AColumn { mode: 1, column: 1 }, ColumnLabel::SColumn { scc: 1 }];
        assert!(WeightedBipartite::new(labels.clone(), 1, [(1, 1, 1)]).is_err());
        assert!(WeightedBipartite::new(labels.clone(), 1, [(2, 1, 0)]).is_err());
        assert!(WeightedBipartite::new(labels, 1, [(3, 1, 0)]).is_err());
        assert!(WeightedBipartite::plain(1, 1, [(1, 1, 2)]).is_err());
    }

    #[test]
    fn all_zero_weights_give_zero_total() {
        let g = WeightedBipartite::plain(3, 2, [(1, 1, 0), (2, 1, 0), (3, 2, 0)]).unwrap();
        let m = min_weight_max_matching(&g);
        assert_eq!((m.cardinality(), m.total_weight), (2, 0));
    }

    fn arb_graph() -> impl Strategy<Value = WeightedBipartite> {
        (1usize..=8, 1usize..=8).prop_flat_map(|(l, r)| {
            proptest::collection::btree_map((1..=l, 1..=r), 0u8..=1, 0..=l * r).prop_map(
                move |e| WeightedBipartite::plain(l, r, e.into_iter().map(|((a, b), w)| (a, b, w))).unwrap(),
            )
        })
    }

    fn assert_valid(g: &WeightedBipartite, m: &Matching) {
        let mut ls = BTreeSet::new();
        let mut rs = BTreeSet::new();
        let mut w = 0;
        for &(l, r) in &m.pairs {
            assert!(ls.insert(l) && rs.insert(r));
            w += u64::from(g.weight(l, r).expect("pair is an edge"));
        }
        assert_eq!(w, m.total_weight);
    }

    proptest! {
        #[test]
        fn mwmm_matches_enumeration(g in arb_graph()) {
            let m = min_weight_max_matching(&g);
            assert_valid(&g, &m);
            prop_assert_eq!((m.cardinality(), m.total_weight), enumerate_best(&g));
            let hk = max_matching(&g);
            assert_valid(&g, &hk);
            prop_assert_eq!(hk.cardinality(), m.cardinality());
            prop_assert_eq!(min_weight_max_matching(&g), m);
        }

        #[test]
        fn generic_rank_bounds_and_monotone(
            (rows, cols, nz, extra) in (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| (
                Just(r), Just(c),
                proptest::collection::btree_set((1..=r, 1..=c), 0..=r * c),
                (1..=r, 1..=c),
            ))
        ) {
            let p = Pattern::new(rows, cols, nz).unwrap();
            let rank = generic_rank(&p);
            prop_assert!(rank <= rows.min(cols));
            let mut q = p.clone();
            q.insert(extra.0, extra.1).unwrap();
            prop_assert!(generic_rank(&q) >= rank);
        }
    }
}
