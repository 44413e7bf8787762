//! Structural (0/1) matrices and switched systems built from them.
//!
//! All row and column indices are 1-based, matching the JSON wire format.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sparse 0/1 matrix recorded as the set of its nonzero positions.
///
/// Nonzeros are kept sorted by `(row, col)`, so iteration order is canonical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    rows: usize,
    cols: usize,
    nonzeros: BTreeSet<(usize, usize)>,
}

impl Pattern {
    /// Builds a pattern, rejecting entries outside `1..=rows` x `1..=cols`.
    /// Repeated entries collapse.
    pub fn new(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Argument(format!(
                "pattern shape must be positive, got {rows}x{cols}"
            )));
        }
        let mut nonzeros = BTreeSet::new();
        for (r, c) in entries {
            if r == 0 || r > rows || c == 0 || c > cols {
                return Err(Error::Argument(format!(
                    "entry ({r},{c}) outside {rows}x{cols} pattern"
                )));
            }
            nonzeros.insert((r, c));
        }
        Ok(Pattern {
            rows,
            cols,
            nonzeros,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "pattern shape must be positive");
        Pattern {
            rows,
            cols,
            nonzeros: BTreeSet::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(n, 1..=n)
    }

    /// `n x n` pattern with diagonal entries at the given indices.
    ///
    /// Panics if an index is outside `1..=n`.
    pub fn diagonal(n: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut p = Self::zeros(n, n);
        for i in indices {
            assert!((1..=n).contains(&i), "diagonal index {i} outside 1..={n}");
            p.nonzeros.insert((i, i));
        }
        p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn nnz(&self) -> usize {
        self.nonzeros.len()
    }

    pub fn is_zero(&self) -> bool {
        self.nonzeros.is_empty()
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        self.nonzeros.contains(&(row, col))
    }

    /// Nonzero positions in `(row, col)` order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.nonzeros.iter().copied()
    }

    pub fn nonzeros(&self) -> &BTreeSet<(usize, usize)> {
        &self.nonzeros
    }

    /// Rows holding at least one nonzero.
    pub fn row_support(&self) -> BTreeSet<usize> {
        self.nonzeros.iter().map(|&(r, _)| r).collect()
    }

    /// Columns holding at least one nonzero.
    pub fn nonzero_columns(&self) -> BTreeSet<usize> {
        self.nonzeros.iter().map(|&(_, c)| c).collect()
    }

    /// Rows of the nonzeros in column `col`, ascending.
    pub fn column(&self, col: usize) -> Vec<usize> {
        self.nonzeros
            .iter()
            .filter(|&&(_, c)| c == col)
            .map(|&(r, _)| r)
            .collect()
    }

    pub fn insert(&mut self, row: usize, col: usize) -> Result<()> {
        if row == 0 || row > self.rows || col == 0 || col > self.cols {
            return Err(Error::Argument(format!(
                "entry ({row},{col}) outside {}x{} pattern",
                self.rows, self.cols
            )));
        }
        self.nonzeros.insert((row, col));
        Ok(())
    }

    /// Column-wise adjacency, 0-based: `out[c]` lists the 0-based rows of column `c+1`.
    pub(crate) fn column_lists(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.cols];
        for &(r, c) in &self.nonzeros {
            out[c - 1].push(r - 1);
        }
        out
    }
}

/// Entrywise OR of equally shaped patterns.
pub fn union(patterns: &[Pattern]) -> Result<Pattern> {
    let first = patterns
        .first()
        .ok_or_else(|| Error::Argument("union of an empty pattern list".into()))?;
    let mut out = first.clone();
    for (k, p) in patterns.iter().enumerate().skip(1) {
        if p.shape() != first.shape() {
            return Err(Error::Dimension(format!(
                "union operand {} is {}x{}, expected {}x{}",
                k + 1,
                p.rows,
                p.cols,
                first.rows,
                first.cols
            )));
        }
        out.nonzeros.extend(p.nonzeros.iter().copied());
    }
    Ok(out)
}

/// Horizontal concatenation `[P_1, ..., P_k]`.
pub fn concat(patterns: &[Pattern]) -> Result<Pattern> {
    let first = patterns
        .first()
        .ok_or_else(|| Error::Argument("concatenation of an empty pattern list".into()))?;
    let rows = first.rows;
    let mut nonzeros = BTreeSet::new();
    let mut offset = 0;
    for (k, p) in patterns.iter().enumerate() {
        if p.rows != rows {
            return Err(Error::Dimension(format!(
                "concat operand {} has {} rows, expected {rows}",
                k + 1,
                p.rows
            )));
        }
        nonzeros.extend(p.nonzeros.iter().map(|&(r, c)| (r, c + offset)));
        offset += p.cols;
    }
    Ok(Pattern {
        rows,
        cols: offset,
        nonzeros,
    })
}

/// A structural switched system: one state pattern per mode and, optionally,
/// one input pattern per mode.
///
/// When no input patterns are given, every mode's input is the `n x n` zero
/// pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchedSystem {
    n: usize,
    a_modes: Vec<Pattern>,
    b_modes: Option<Vec<Pattern>>,
}

impl SwitchedSystem {
    pub fn new(n: usize, a_modes: Vec<Pattern>, b_modes: Option<Vec<Pattern>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("state dimension must be positive".into()));
        }
        if a_modes.is_empty() {
            return Err(Error::Argument("a switched system needs at least one mode".into()));
        }
        for (k, a) in a_modes.iter().enumerate() {
            if a.shape() != (n, n) {
                return Err(Error::Dimension(format!(
                    "mode {} state pattern is {}x{}, expected {n}x{n}",
                    k + 1,
                    a.rows,
                    a.cols
                )));
            }
        }
        if let Some(bs) = &b_modes {
            if bs.len() != a_modes.len() {
                return Err(Error::Dimension(format!(
                    "{} input patterns for {} modes",
                    bs.len(),
                    a_modes.len()
                )));
            }
            for (k, b) in bs.iter().enumerate() {
                if b.rows != n {
                    return Err(Error::Dimension(format!(
                        "mode {} input pattern has {} rows, expected {n}",
                        k + 1,
                        b.rows
                    )));
                }
            }
        }
        Ok(SwitchedSystem {
            n,
            a_modes,
            b_modes,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode_count(&self) -> usize {
        self.a_modes.len()
    }

    pub fn a_modes(&self) -> &[Pattern] {
        &self.a_modes
    }

    pub fn b_modes(&self) -> Option<&[Pattern]> {
        self.b_modes.as_deref()
    }

    pub fn has_inputs(&self) -> bool {
        self.b_modes.is_some()
    }

    /// Input patterns for every mode, substituting `n x n` zeros when absent.
    pub fn inputs_or_zero(&self) -> Vec<Pattern> {
        match &self.b_modes {
            Some(bs) => bs.clone(),
            None => vec![Pattern::zeros(self.n, self.n); self.mode_count()],
        }
    }

    /// `A_1 ∨ ... ∨ A_m`.
    pub fn a_union(&self) -> Pattern {
        union(&self.a_modes).expect("mode shapes validated at construction")
    }

    /// Entrywise OR of the input patterns. Input patterns of differing column
    /// counts are OR-ed after padding to the widest one.
    pub fn b_union(&self) -> Pattern {
        let bs = self.inputs_or_zero();
        let cols = bs.iter().map(Pattern::cols).max().unwrap_or(self.n);
        let mut out = Pattern::zeros(self.n, cols);
        for b in &bs {
            out.nonzeros.extend(b.iter());
        }
        out
    }

    /// Same state dynamics with the given input patterns.
    pub fn with_inputs(&self, b_modes: Vec<Pattern>) -> Result<Self> {
        Self::new(self.n, self.a_modes.clone(), Some(b_modes))
    }

    pub fn without_inputs(&self) -> Self {
        SwitchedSystem {
            n: self.n,
            a_modes: self.a_modes.clone(),
            b_modes: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        parse_system(text)
    }

    pub fn to_json(&self) -> String {
        serialize_system(self)
    }
}

#[derive(Serialize, Deserialize)]
struct WireSystem {
    n: i64,
    modes: Vec<WireMode>,
}

#[derive(Serialize, Deserialize)]
struct WireMode {
    #[serde(rename = "A")]
    a: Vec<Vec<i64>>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    b: Option<Vec<Vec<i64>>>,
    /// Input column count; defaults to `n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<i64>,
}

fn parse_entries(field: &str, raw: &[Vec<i64>], rows: usize, cols: usize) -> Result<Pattern> {
    let mut nonzeros = BTreeSet::new();
    for (k, pair) in raw.iter().enumerate() {
        let here = format!("{field}[{k}]");
        let [r, c] = pair.as_slice() else {
            return Err(Error::parse(
                here,
                format!("expected a [row, col] pair, got {} values", pair.len()),
            ));
        };
        if *r < 1 || *r as u64 > rows as u64 {
            return Err(Error::parse(
                here,
                format!("row index {r} out of range 1..={rows}"),
            ));
        }
        if *c < 1 || *c as u64 > cols as u64 {
            return Err(Error::parse(
                here,
                format!("column index {c} out of range 1..={cols}"),
            ));
        }
        if !nonzeros.insert((*r as usize, *c as usize)) {
            return Err(Error::parse(here, format!("duplicate entry [{r},{c}]")));
        }
    }
    Ok(Pattern {
        rows,
        cols,
        nonzeros,
    })
}

/// Parses the JSON system document
/// `{"n": int, "modes": [{"A": [[r,c],...], "B": [[r,c],...]}, ...]}`.
///
/// Either every mode carries `"B"` or none does; a mode may also give `"p"`,
/// the input column count, which otherwise defaults to `n`.
pub fn parse_system(text: &str) -> Result<SwitchedSystem> {
    let wire: WireSystem =
        serde_json::from_str(text).map_err(|e| Error::parse("document", e.to_string()))?;
    if wire.n < 1 {
        return Err(Error::parse("n", format!("state dimension {} must be >= 1", wire.n)));
    }
    let n = wire.n as usize;
    if wire.modes.is_empty() {
        return Err(Error::parse("modes", "at least one mode is required"));
    }
    let with_b = wire.modes.iter().filter(|m| m.b.is_some()).count();
    if with_b != 0 && with_b != wire.modes.len() {
        return Err(Error::parse(
            "modes",
            "either every mode or no mode must carry \"B\"",
        ));
    }

    let mut a_modes = Vec::with_capacity(wire.modes.len());
    let mut b_modes = Vec::new();
    for (k, mode) in wire.modes.iter().enumerate() {
        a_modes.push(parse_entries(&format!("modes[{k}].A"), &mode.a, n, n)?);
        let p = match mode.p {
            None => n,
            Some(p) if p >= 1 && p as u64 <= n as u64 => p as usize,
            Some(p) => {
                return Err(Error::parse(
                    format!("modes[{k}].p"),
                    format!("input column count {p} out of range 1..={n}"),
                ))
            }
        };
        match &mode.b {
            Some(b) => b_modes.push(parse_entries(&format!("modes[{k}].B"), b, n, p)?),
            None if mode.p.is_some() => {
                return Err(Error::parse(format!("modes[{k}].p"), "\"p\" given without \"B\""))
            }
            None => {}
        }
    }
    let b_modes = (with_b > 0).then_some(b_modes);
    SwitchedSystem::new(n, a_modes, b_modes)
}

fn wire_entries(p: &Pattern) -> Vec<Vec<i64>> {
    p.iter().map(|(r, c)| vec![r as i64, c as i64]).collect()
}

/// Serializes to the JSON system document with nonzeros sorted by `(row, col)`.
pub fn serialize_system(system: &SwitchedSystem) -> String {
    let modes = (0..system.mode_count())
        .map(|k| {
            let b = system.b_modes.as_ref().map(|bs| &bs[k]);
            WireMode {
                a: wire_entries(&system.a_modes[k]),
                b: b.map(wire_entries),
                p: b.filter(|b| b.cols != system.n).map(|b| b.cols as i64),
            }
        })
        .collect();
    let wire = WireSystem {
        n: system.n as i64,
        modes,
    };
    serde_json::to_string(&wire).expect("wire system serializes")
}
