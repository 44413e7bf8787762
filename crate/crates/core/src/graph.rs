//! State digraphs, strongly connected components and input accessibility.
//!
//! Vertices are state indices `1..=n`. Component ids are 0-based positions in
//! [`SccDecomposition::components`], ordered by smallest member vertex.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pattern::Pattern;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    vertex_count: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Digraph {
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == 0 || u > vertex_count || v == 0 || v > vertex_count {
                return Err(Error::Argument(format!(
                    "edge ({u},{v}) outside vertex range 1..={vertex_count}"
                )));
            }
            set.insert((u, v));
        }
        Ok(Digraph {
            vertex_count,
            edges: set,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    /// 0-based successor lists, each ascending.
    fn successors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(u, v) in &self.edges {
            adj[u - 1].push(v - 1);
        }
        adj
    }
}

/// State digraph of a square pattern: entry `(j, k)` yields the edge `k -> j`.
pub fn build_state_digraph(pattern: &Pattern) -> Result<Digraph> {
    if !pattern.is_square() {
        return Err(Error::Dimension(format!(
            "state digraph needs a square pattern, got {}x{}",
            pattern.rows(),
            pattern.cols()
        )));
    }
    Ok(Digraph {
        vertex_count: pattern.rows(),
        edges: pattern.iter().map(|(j, k)| (k, j)).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccDecomposition {
    /// `component_of[v - 1]` is the component id of vertex `v`.
    pub component_of: Vec<usize>,
    /// Member vertices of each component, ascending.
    pub components: Vec<Vec<usize>>,
    /// Condensation edges between distinct components.
    pub dag_edges: BTreeSet<(usize, usize)>,
    /// Components with no incoming condensation edge, ascending by id.
    pub non_top_linked: Vec<usize>,
}

impl SccDecomposition {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn component_of_vertex(&self, v: usize) -> usize {
        self.component_of[v - 1]
    }

    pub fn is_non_top_linked(&self, component: usize) -> bool {
        self.non_top_linked.binary_search(&component).is_ok()
    }

    /// Member vertices of the `j`-th non-top-linked component, `j` 1-based.
    pub fn non_top_linked_members(&self, j: usize) -> &[usize] {
        &self.components[self.non_top_linked[j - 1]]
    }
}

/// Iterative Tarjan. Returns raw components in completion order, 0-based.
fn tarjan(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    const UNVISITED: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut comps = Vec::new();
    // (vertex, position of the next successor to explore)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = adj[v].get(*pos) {
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comps.push(comp);
            }
        }
    }
    comps
}

pub fn scc_decompose(g: &Digraph) -> SccDecomposition {
    let adj = g.successors();
    let mut components: Vec<Vec<usize>> = tarjan(&adj)
        .into_iter()
        .map(|c| {
            let mut c: Vec<usize> = c.into_iter().map(|v| v + 1).collect();
            c.sort_unstable();
            c
        })
        .collect();
    components.sort_unstable_by_key(|c| c[0]);

    let mut component_of = vec![0; g.vertex_count];
    for (id, comp) in components.iter().enumerate() {
        for &v in comp {
            component_of[v - 1] = id;
        }
    }
    let dag_edges: BTreeSet<(usize, usize)> = g
        .edges
        .iter()
        .map(|&(u, v)| (component_of[u - 1], component_of[v - 1]))
        .filter(|(a, b)| a != b)
        .collect();
    let mut has_incoming = vec![false; components.len()];
    for &(_, b) in &dag_edges {
        has_incoming[b] = true;
    }
    let non_top_linked = (0..components.len()).filter(|&c| !has_incoming[c]).collect();

    SccDecomposition {
        component_of,
        components,
        dag_edges,
        non_top_linked,
    }
}

/// States reachable from the row support of `b_union`, the actuated states included.
pub fn accessible_set(state_digraph: &Digraph, b_union: &Pattern) -> Result<BTreeSet<usize>> {
    let n = state_digraph.vertex_count;
    if b_union.rows() != n {
        return Err(Error::Dimension(format!(
            "input pattern has {} rows, state digraph has {n} vertices",
            b_union.rows()
        )));
    }
    let adj = state_digraph.successors();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for r in b_union.row_support() {
        seen[r - 1] = true;
        queue.push_back(r - 1);
    }
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    Ok((1..=n).filter(|v| seen[v - 1]).collect())
}

/// Outcome of the accessibility check on non-top-linked components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AccessibilityCheck {
    pub pass: bool,
    /// Ids of non-top-linked components with no actuated state, ascending.
    pub uncovered: Vec<usize>,
}

/// Every non-top-linked component must contain an actuated state.
pub fn condition_i_holds(decomp: &SccDecomposition, b_union: &Pattern) -> Result<AccessibilityCheck> {
    if b_union.rows() != decomp.component_of.len() {
        return Err(Error::Dimension(format!(
            "input pattern has {} rows, decomposition covers {} states",
            b_union.rows(),
            decomp.component_of.len()
        )));
    }
    let mut covered = vec![false; decomp.components.len()];
    for r in b_union.row_support() {
        covered[decomp.component_of[r - 1]] = true;
    }
    let uncovered: Vec<usize> = decomp
        .non_top_linked
        .iter()
        .copied()
        .filter(|&c| !covered[c])
        .collect();
    Ok(AccessibilityCheck {
        pass: uncovered.is_empty(),
        uncovered,
    })
}

/// Graphviz rendering of the state digraph of `a` with the inputs of `b`.
///
/// One dashed cluster per SCC; non-top-linked clusters are labelled
/// `N{j}^T`. Inputs `u{k}` (nonzero columns of `b`) are drawn as boxes.
pub fn to_dot(a: &Pattern, b: Option<&Pattern>) -> Result<String> {
    use std::fmt::Write;

    let g = build_state_digraph(a)?;
    if let Some(b) = b {
        if b.rows() != a.rows() {
            return Err(Error::Dimension(format!(
                "input pattern has {} rows, expected {}",
                b.rows(),
                a.rows()
            )));
        }
    }
    let decomp = scc_decompose(&g);
    let mut out = String::from("digraph G {\n  rankdir=LR;\n");
    for (id, comp) in decomp.components.iter().enumerate() {
        writeln!(out, "  subgraph cluster_{} {{", id + 1).unwrap();
        out.push_str("    style=dashed;\n    color=gray;\n");
        if let Ok(j) = decomp.non_top_linked.binary_search(&id) {
            writeln!(out, "    label=\"N{}^T\";", j + 1).unwrap();
        } else {
            out.push_str("    label=\"\";\n");
        }
        for v in comp {
            writeln!(out, "    x{v};").unwrap();
        }
        out.push_str("  }\n");
    }
    if let Some(b) = b {
        for k in b.nonzero_columns() {
            writeln!(out, "  u{k} [shape=box];").unwrap();
        }
        let mut input_edges: Vec<(usize, usize)> = b.iter().map(|(r, c)| (c, r)).collect();
        input_edges.sort_unstable();
        for (k, v) in input_edges {
            writeln!(out, "  u{k} -> x{v};").unwrap();
        }
    }
    for &(u, v) in &g.edges {
        writeln!(out, "  x{u} -> x{v};").unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}
