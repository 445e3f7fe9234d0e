//! The tail-biting trellis graph.
//!
//! A trellis of depth `n` has vertex levels `0..n`. Section `j` (for
//! `j` in `0..n`) holds the edges from level `j` to level `(j+1) % n`,
//! each labeled with one code symbol. Walks of length `n` that return to
//! their starting vertex spell code words, and the multiset of all such
//! words is the label code of the trellis.
//!
//! Vertices are addressed by `(level, ordinal)` where ordinals are dense
//! indices `0..count` within a level. Edge lists are kept sorted and
//! duplicate-free, so two trellises built by different routes compare
//! structurally with `==`.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// Upper bound on the number of cycles [`Trellis::cycles`] will enumerate.
pub const MAX_CYCLES: usize = 1 << 20;

/// A vertex: its position within the level and an arbitrary bit-string
/// label (state vector, coset representative, and so on).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub ordinal: usize,
    pub label: BitVector,
}

/// One labeled edge of a trellis section, referring to vertex ordinals of
/// the adjacent levels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub tail: usize,
    pub symbol: u8,
    pub head: usize,
}

/// A closed length-`n` walk: the level-0 start vertex, the edges taken,
/// and the word they spell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub start: usize,
    pub edges: Vec<Edge>,
    pub word: BitVector,
}

/// Collects vertices and edges, then freezes them into a [`Trellis`].
/// Edges deduplicate; vertices receive consecutive ordinals per level.
pub struct TrellisBuilder {
    depth: usize,
    levels: Vec<Vec<Vertex>>,
    edges: Vec<BTreeSet<Edge>>,
}

impl TrellisBuilder {
    /// # Panics
    /// Panics if `depth` is zero.
    pub fn new(depth: usize) -> Self {
        assert!(depth > 0, "a trellis needs at least one level");
        TrellisBuilder {
            depth,
            levels: vec![Vec::new(); depth],
            edges: vec![BTreeSet::new(); depth],
        }
    }

    /// Appends a vertex and returns its ordinal.
    ///
    /// # Panics
    /// Panics if `level` is out of range.
    pub fn add_vertex(&mut self, level: usize, label: BitVector) -> usize {
        let ordinal = self.levels[level].len();
        self.levels[level].push(Vertex { ordinal, label });
        ordinal
    }

    /// Inserts an edge into section `section` (level `section` to level
    /// `(section + 1) % depth`). Duplicate edges collapse.
    ///
    /// # Panics
    /// Panics if `section` is out of range or the symbol is not 0 or 1.
    pub fn add_edge(&mut self, section: usize, tail: usize, symbol: u8, head: usize) {
        assert!(symbol <= 1, "edge symbol must be 0 or 1");
        self.edges[section].insert(Edge { tail, symbol, head });
    }

    /// Validates ordinal ranges and returns the finished trellis.
    pub fn finish(self) -> Result<Trellis> {
        let t = Trellis {
            depth: self.depth,
            levels: self.levels,
            edges: self
                .edges
                .into_iter()
                .map(|set| set.into_iter().collect())
                .collect(),
        };
        t.check_structure()?;
        Ok(t)
    }
}

/// An immutable tail-biting trellis. See the module documentation for the
/// level and section conventions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trellis {
    depth: usize,
    levels: Vec<Vec<Vertex>>,
    edges: Vec<Vec<Edge>>,
}

impl Trellis {
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// # Panics
    /// Panics if `level` is out of range.
    pub fn level(&self, level: usize) -> &[Vertex] {
        &self.levels[level]
    }

    /// Edges of section `section`, sorted by `(tail, symbol, head)`.
    ///
    /// # Panics
    /// Panics if `section` is out of range.
    pub fn section(&self, section: usize) -> &[Edge] {
        &self.edges[section]
    }

    pub fn vertex_count(&self, level: usize) -> usize {
        self.levels[level].len()
    }

    pub fn edge_count(&self, section: usize) -> usize {
        self.edges[section].len()
    }

    pub fn total_vertices(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn total_edges(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    fn check_structure(&self) -> Result<()> {
        if self.depth == 0 || self.levels.len() != self.depth || self.edges.len() != self.depth {
            return Err(Error::InvalidTrellis(format!(
                "depth {} does not match {} levels / {} sections",
                self.depth,
                self.levels.len(),
                self.edges.len()
            )));
        }
        for (i, level) in self.levels.iter().enumerate() {
            for (j, v) in level.iter().enumerate() {
                if v.ordinal != j {
                    return Err(Error::InvalidTrellis(format!(
                        "level {i}: vertex at position {j} carries ordinal {}",
                        v.ordinal
                    )));
                }
            }
        }
        for section in 0..self.depth {
            let head_level = (section + 1) % self.depth;
            for e in &self.edges[section] {
                if e.symbol > 1 {
                    return Err(Error::InvalidTrellis(format!(
                        "section {section}: edge symbol {} is not a bit",
                        e.symbol
                    )));
                }
                if e.tail >= self.vertex_count(section) {
                    return Err(Error::InvalidTrellis(format!(
                        "section {section}: tail ordinal {} out of range",
                        e.tail
                    )));
                }
                if e.head >= self.vertex_count(head_level) {
                    return Err(Error::InvalidTrellis(format!(
                        "section {section}: head ordinal {} out of range",
                        e.head
                    )));
                }
            }
        }
        Ok(())
    }

    /// Enumerates every cycle (closed length-`depth` walk from level 0) in
    /// deterministic order: start vertices ascending, edges explored in
    /// sorted order. Fails once [`MAX_CYCLES`] is exceeded.
    pub fn cycles(&self) -> Result<Vec<Cycle>> {
        let mut out = Vec::new();
        let mut path: Vec<Edge> = Vec::with_capacity(self.depth);
        for start in 0..self.vertex_count(0) {
            self.cycle_walk(start, 0, start, &mut path, &mut out)?;
        }
        Ok(out)
    }

    fn cycle_walk(
        &self,
        start: usize,
        section: usize,
        at: usize,
        path: &mut Vec<Edge>,
        out: &mut Vec<Cycle>,
    ) -> Result<()> {
        if section == self.depth {
            if at == start {
                if out.len() == MAX_CYCLES {
                    return Err(Error::CapacityExceeded {
                        dim: self.depth,
                        limit: MAX_CYCLES,
                    });
                }
                let word =
                    BitVector::from_bools(path.iter().map(|e| e.symbol == 1).collect());
                out.push(Cycle {
                    start,
                    edges: path.clone(),
                    word,
                });
            }
            return Ok(());
        }
        for e in &self.edges[section] {
            if e.tail != at {
                continue;
            }
            // On the final section only edges closing the cycle matter.
            if section + 1 == self.depth && e.head != start {
                continue;
            }
            path.push(*e);
            self.cycle_walk(start, section + 1, e.head, path, out)?;
            path.pop();
        }
        Ok(())
    }

    /// The multiset of words spelled by all cycles, sorted ascending.
    pub fn label_code(&self) -> Result<Vec<BitVector>> {
        let mut words: Vec<BitVector> = self.cycles()?.into_iter().map(|c| c.word).collect();
        words.sort();
        Ok(words)
    }

    /// Reports vertices and edges that lie on no cycle. A trellis with an
    /// empty report is reduced.
    pub fn is_reduced(&self) -> ReducedReport {
        let n = self.depth;
        let mut vertex_alive: Vec<Vec<bool>> =
            self.levels.iter().map(|l| vec![false; l.len()]).collect();
        let mut edge_alive: Vec<Vec<bool>> =
            self.edges.iter().map(|e| vec![false; e.len()]).collect();

        for start in 0..self.vertex_count(0) {
            // fwd[j]: vertices reachable from `start` after j steps;
            // bwd[j]: vertices at step j from which `start` is reachable
            // again at step n. Step j lives on level j % n.
            let mut fwd: Vec<Vec<bool>> = (0..=n)
                .map(|j| vec![false; self.vertex_count(j % n)])
                .collect();
            fwd[0][start] = true;
            for j in 0..n {
                for e in &self.edges[j] {
                    if fwd[j][e.tail] {
                        fwd[j + 1][e.head] = true;
                    }
                }
            }
            let mut bwd: Vec<Vec<bool>> = (0..=n)
                .map(|j| vec![false; self.vertex_count(j % n)])
                .collect();
            bwd[n][start] = true;
            for j in (0..n).rev() {
                for e in &self.edges[j] {
                    if bwd[j + 1][e.head] {
                        bwd[j][e.tail] = true;
                    }
                }
            }
            for j in 0..n {
                for v in 0..self.vertex_count(j) {
                    if fwd[j][v] && bwd[j][v] {
                        vertex_alive[j][v] = true;
                    }
                }
                for (idx, e) in self.edges[j].iter().enumerate() {
                    if fwd[j][e.tail] && bwd[j + 1][e.head] {
                        edge_alive[j][idx] = true;
                    }
                }
            }
        }

        let mut report = ReducedReport::default();
        for (level, alive) in vertex_alive.iter().enumerate() {
            for (v, &ok) in alive.iter().enumerate() {
                if !ok {
                    report.orphan_vertices.push((level, v));
                }
            }
        }
        for (section, alive) in edge_alive.iter().enumerate() {
            for (idx, &ok) in alive.iter().enumerate() {
                if !ok {
                    report.orphan_edges.push((section, self.edges[section][idx]));
                }
            }
        }
        report
    }

    /// Per-level vertex counts, per-section edge counts and per-vertex
    /// degrees.
    pub fn profile(&self) -> Profile {
        let n = self.depth;
        let mut out_degrees: Vec<Vec<usize>> =
            self.levels.iter().map(|l| vec![0; l.len()]).collect();
        let mut in_degrees: Vec<Vec<usize>> =
            self.levels.iter().map(|l| vec![0; l.len()]).collect();
        for j in 0..n {
            let head_level = (j + 1) % n;
            for e in &self.edges[j] {
                out_degrees[j][e.tail] += 1;
                in_degrees[head_level][e.head] += 1;
            }
        }
        Profile {
            vertex_counts: self.levels.iter().map(Vec::len).collect(),
            edge_counts: self.edges.iter().map(Vec::len).collect(),
            out_degrees,
            in_degrees,
        }
    }

    /// Exact structural equality: same depth, same ordinals and labels per
    /// level, same sorted edge lists per section.
    pub fn identical(&self, other: &Trellis) -> bool {
        self == other
    }

    /// Searches for a level-preserving, symbol-preserving vertex bijection
    /// (labels are ignored). `budget` caps the number of search nodes.
    pub fn isomorphic(&self, other: &Trellis, budget: u64) -> Result<IsoOutcome> {
        iso::search(self, other, budget)
    }

    /// Deterministic Graphviz rendering: one `rank=same` line per
    /// non-empty level, one line per vertex, one line per edge.
    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        s.push_str("digraph trellis {\n");
        s.push_str("  rankdir=LR;\n");
        for (i, level) in self.levels.iter().enumerate() {
            if level.is_empty() {
                continue;
            }
            s.push_str("  { rank=same;");
            for v in level {
                s.push_str(&format!(" L{i}_{};", v.ordinal));
            }
            s.push_str(" }\n");
        }
        for (i, level) in self.levels.iter().enumerate() {
            for v in level {
                s.push_str(&format!("  L{i}_{} [label=\"{}\"];\n", v.ordinal, v.label));
            }
        }
        for (j, section) in self.edges.iter().enumerate() {
            let head_level = (j + 1) % self.depth;
            for e in section {
                s.push_str(&format!(
                    "  L{j}_{} -> L{head_level}_{} [label=\"{}\"];\n",
                    e.tail, e.head, e.symbol
                ));
            }
        }
        s.push_str("}\n");
        s
    }

    /// Pretty-printed JSON; [`Trellis::from_json`] round-trips it exactly.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("trellis serialization");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Trellis> {
        let t: Trellis = serde_json::from_str(text)?;
        t.check_structure()?;
        Ok(t)
    }
}

/// Vertices and edges not lying on any cycle.
#[derive(Clone, Debug, Default)]
pub struct ReducedReport {
    pub orphan_vertices: Vec<(usize, usize)>,
    pub orphan_edges: Vec<(usize, Edge)>,
}

impl ReducedReport {
    pub fn is_reduced(&self) -> bool {
        self.orphan_vertices.is_empty() && self.orphan_edges.is_empty()
    }
}

/// Per-level counts and degrees of a trellis. `edge_counts[j]` counts the
/// edges of section `j`, that is the edges entering level `(j+1) % n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Profile {
    pub vertex_counts: Vec<usize>,
    pub edge_counts: Vec<usize>,
    pub out_degrees: Vec<Vec<usize>>,
    pub in_degrees: Vec<Vec<usize>>,
}

impl Profile {
    /// `(min, max)` outgoing degree at a level; `(0, 0)` for empty levels.
    pub fn out_degree_range(&self, level: usize) -> (usize, usize) {
        degree_range(&self.out_degrees[level])
    }

    pub fn in_degree_range(&self, level: usize) -> (usize, usize) {
        degree_range(&self.in_degrees[level])
    }
}

fn degree_range(degrees: &[usize]) -> (usize, usize) {
    match (degrees.iter().min(), degrees.iter().max()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => (0, 0),
    }
}

/// Result of an isomorphism search that stayed within budget.
#[derive(Clone, Debug)]
pub enum IsoOutcome {
    /// A witness was found. `map[level][ordinal]` gives the image ordinal.
    Isomorphic(IsoWitness),
    /// No witness exists; `level` is the first level where matching failed
    /// (or the quick count/degree screen found a difference).
    NotIsomorphic { level: usize },
}

impl IsoOutcome {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoOutcome::Isomorphic(_))
    }
}

#[derive(Clone, Debug)]
pub struct IsoWitness {
    pub map: Vec<Vec<usize>>,
    /// Whether the label correspondence induced by the witness respects
    /// addition of labels, checked per level. `None` when a level is too
    /// large to check exhaustively.
    pub label_linear: Option<bool>,
}

mod iso {
    use super::*;

    /// Per-vertex degree signature: incoming and outgoing edge counts
    /// split by symbol.
    type Signature = (usize, usize, usize, usize);

    pub fn search(a: &Trellis, b: &Trellis, budget: u64) -> Result<IsoOutcome> {
        if a.depth() != b.depth() {
            return Ok(IsoOutcome::NotIsomorphic { level: 0 });
        }
        let n = a.depth();
        for level in 0..n {
            if a.vertex_count(level) != b.vertex_count(level)
                || a.edge_count(level) != b.edge_count(level)
            {
                return Ok(IsoOutcome::NotIsomorphic { level });
            }
        }
        let sig_a = signatures(a);
        let sig_b = signatures(b);
        for level in 0..n {
            let mut sa = sig_a[level].clone();
            let mut sb = sig_b[level].clone();
            sa.sort_unstable();
            sb.sort_unstable();
            if sa != sb {
                return Ok(IsoOutcome::NotIsomorphic { level });
            }
        }

        let order: Vec<(usize, usize)> = (0..n)
            .flat_map(|l| (0..a.vertex_count(l)).map(move |v| (l, v)))
            .collect();
        let mut state = State {
            a,
            b,
            sig_a: &sig_a,
            sig_b: &sig_b,
            map: (0..n).map(|l| vec![usize::MAX; a.vertex_count(l)]).collect(),
            used: (0..n).map(|l| vec![false; b.vertex_count(l)]).collect(),
            nodes: 0,
            budget,
            deepest: 0,
        };
        if extend(&mut state, &order, 0)? {
            let map = state.map;
            let label_linear = check_label_linearity(a, b, &map);
            Ok(IsoOutcome::Isomorphic(IsoWitness { map, label_linear }))
        } else {
            Ok(IsoOutcome::NotIsomorphic {
                level: order.get(state.deepest).map_or(0, |&(l, _)| l),
            })
        }
    }

    struct State<'t> {
        a: &'t Trellis,
        b: &'t Trellis,
        sig_a: &'t [Vec<Signature>],
        sig_b: &'t [Vec<Signature>],
        map: Vec<Vec<usize>>,
        used: Vec<Vec<bool>>,
        nodes: u64,
        budget: u64,
        deepest: usize,
    }

    fn signatures(t: &Trellis) -> Vec<Vec<Signature>> {
        let n = t.depth();
        let mut sigs: Vec<Vec<Signature>> = (0..n)
            .map(|l| vec![(0, 0, 0, 0); t.vertex_count(l)])
            .collect();
        for j in 0..n {
            let head_level = (j + 1) % n;
            for e in t.section(j) {
                if e.symbol == 0 {
                    sigs[j][e.tail].0 += 1;
                    sigs[head_level][e.head].2 += 1;
                } else {
                    sigs[j][e.tail].1 += 1;
                    sigs[head_level][e.head].3 += 1;
                }
            }
        }
        sigs
    }

    fn extend(state: &mut State, order: &[(usize, usize)], idx: usize) -> Result<bool> {
        if idx == order.len() {
            return Ok(verify(state));
        }
        state.deepest = state.deepest.max(idx);
        let (level, v) = order[idx];
        for cand in 0..state.b.vertex_count(level) {
            if state.used[level][cand] || state.sig_a[level][v] != state.sig_b[level][cand] {
                continue;
            }
            state.nodes += 1;
            if state.nodes > state.budget {
                return Err(Error::SearchBudget {
                    budget: state.budget,
                });
            }
            if !compatible(state, level, v, cand) {
                continue;
            }
            state.map[level][v] = cand;
            state.used[level][cand] = true;
            if extend(state, order, idx + 1)? {
                return Ok(true);
            }
            state.map[level][v] = usize::MAX;
            state.used[level][cand] = false;
        }
        Ok(false)
    }

    /// Checks edges between `v` and already-assigned vertices in both
    /// directions of both incident sections.
    fn compatible(state: &State, level: usize, v: usize, cand: usize) -> bool {
        let n = state.a.depth();
        let section_in = (level + n - 1) % n;
        let section_out = level;
        let head_level = (level + 1) % n;

        // Incoming edges: tails live on level `section_in`.
        for e in state.a.section(section_in) {
            if e.head != v {
                continue;
            }
            let mapped_tail = state.map[section_in][e.tail];
            if mapped_tail != usize::MAX
                && !has_edge(state.b, section_in, mapped_tail, e.symbol, cand)
            {
                return false;
            }
        }
        for e in state.b.section(section_in) {
            if e.head != cand {
                continue;
            }
            if let Some(pre_tail) = preimage(&state.map[section_in], e.tail) {
                if !has_edge(state.a, section_in, pre_tail, e.symbol, v) {
                    return false;
                }
            }
        }
        // Outgoing edges: heads live on level `head_level`.
        for e in state.a.section(section_out) {
            if e.tail != v {
                continue;
            }
            let mapped_head = state.map[head_level][e.head];
            if mapped_head != usize::MAX
                && !has_edge(state.b, section_out, cand, e.symbol, mapped_head)
            {
                return false;
            }
        }
        for e in state.b.section(section_out) {
            if e.tail != cand {
                continue;
            }
            if let Some(pre_head) = preimage(&state.map[head_level], e.head) {
                if !has_edge(state.a, section_out, v, e.symbol, pre_head) {
                    return false;
                }
            }
        }
        true
    }

    fn has_edge(t: &Trellis, section: usize, tail: usize, symbol: u8, head: usize) -> bool {
        t.section(section)
            .binary_search(&Edge { tail, symbol, head })
            .is_ok()
    }

    fn preimage(map: &[usize], image: usize) -> Option<usize> {
        map.iter().position(|&m| m == image)
    }

    /// Full edge-set verification of a completed assignment.
    fn verify(state: &State) -> bool {
        let n = state.a.depth();
        for j in 0..n {
            let head_level = (j + 1) % n;
            for e in state.a.section(j) {
                let mapped = Edge {
                    tail: state.map[j][e.tail],
                    symbol: e.symbol,
                    head: state.map[head_level][e.head],
                };
                if state.b.section(j).binary_search(&mapped).is_err() {
                    return false;
                }
            }
        }
        true
    }

    const LINEARITY_CHECK_LIMIT: usize = 4096;

    fn check_label_linearity(a: &Trellis, b: &Trellis, map: &[Vec<usize>]) -> Option<bool> {
        for level in 0..a.depth() {
            if a.vertex_count(level) > LINEARITY_CHECK_LIMIT {
                return None;
            }
            let pairs: HashMap<&BitVector, &BitVector> = a
                .level(level)
                .iter()
                .map(|v| (&v.label, &b.level(level)[map[level][v.ordinal]].label))
                .collect();
            for v in a.level(level) {
                for w in a.level(level) {
                    let sum = v.label.xor(&w.label);
                    let (Some(&iv), Some(&iw), Some(&isum)) =
                        (pairs.get(&v.label), pairs.get(&w.label), pairs.get(&sum))
                    else {
                        continue;
                    };
                    if iv.xor(iw) != *isum {
                        return Some(false);
                    }
                }
            }
        }
        Some(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    /// Two-level trellis spelling {00, 11}.
    fn toy() -> Trellis {
        let mut b = TrellisBuilder::new(2);
        b.add_vertex(0, bv("0"));
        b.add_vertex(1, bv("0"));
        b.add_vertex(1, bv("1"));
        b.add_edge(0, 0, 0, 0);
        b.add_edge(0, 0, 1, 1);
        b.add_edge(1, 0, 0, 0);
        b.add_edge(1, 1, 1, 0);
        b.finish().unwrap()
    }

    #[test]
    fn cycles_spell_the_label_code() {
        let t = toy();
        let words = t.label_code().unwrap();
        assert_eq!(words, vec![bv("00"), bv("11")]);
        let cycles = t.cycles().unwrap();
        assert_eq!(cycles.len(), 2);
        assert!(cycles.iter().all(|c| c.start == 0));
        assert!(cycles.iter().all(|c| c.edges.len() == 2));
    }

    #[test]
    fn builder_deduplicates_edges() {
        let mut b = TrellisBuilder::new(2);
        b.add_vertex(0, bv("0"));
        b.add_vertex(1, bv("0"));
        b.add_edge(0, 0, 1, 0);
        b.add_edge(0, 0, 1, 0);
        b.add_edge(1, 0, 1, 0);
        let t = b.finish().unwrap();
        assert_eq!(t.edge_count(0), 1);
    }

    #[test]
    fn finish_rejects_dangling_edges() {
        let mut b = TrellisBuilder::new(2);
        b.add_vertex(0, bv("0"));
        b.add_vertex(1, bv("0"));
        b.add_edge(0, 0, 0, 5);
        let err = b.finish().unwrap_err();
        assert!(matches!(err, Error::InvalidTrellis(_)));
    }

    #[test]
    fn reducedness_flags_dead_ends() {
        let mut b = TrellisBuilder::new(2);
        b.add_vertex(0, bv("0"));
        b.add_vertex(1, bv("0"));
        b.add_vertex(1, bv("1")); // unreachable from any cycle
        b.add_edge(0, 0, 0, 0);
        b.add_edge(1, 0, 0, 0);
        let t = b.finish().unwrap();
        let report = t.is_reduced();
        assert!(!report.is_reduced());
        assert_eq!(report.orphan_vertices, vec![(1, 1)]);
        assert!(report.orphan_edges.is_empty());

        assert!(toy().is_reduced().is_reduced());
    }

    #[test]
    fn profile_counts_and_degrees() {
        let t = toy();
        let p = t.profile();
        assert_eq!(p.vertex_counts, vec![1, 2]);
        assert_eq!(p.edge_counts, vec![2, 2]);
        assert_eq!(p.out_degree_range(0), (2, 2));
        assert_eq!(p.in_degree_range(0), (2, 2));
        assert_eq!(p.out_degree_range(1), (1, 1));
        // Handshake: section edges equal summed degrees on both ends.
        let total_out: usize = p.out_degrees[0].iter().sum();
        assert_eq!(total_out, p.edge_counts[0]);
    }

    #[test]
    fn identical_is_exact_equality() {
        let t = toy();
        assert!(t.identical(&t.clone()));
        let mut b = TrellisBuilder::new(2);
        b.add_vertex(0, bv("1")); // different label
        b.add_vertex(1, bv("0"));
        b.add_vertex(1, bv("1"));
        b.add_edge(0, 0, 0, 0);
        b.add_edge(0, 0, 1, 1);
        b.add_edge(1, 0, 0, 0);
        b.add_edge(1, 1, 1, 0);
        let other = b.finish().unwrap();
        assert!(!t.identical(&other));
        assert!(matches!(
            t.isomorphic(&other, 10_000).unwrap(),
            IsoOutcome::Isomorphic(_)
        ));
    }

    #[test]
    fn isomorphism_finds_a_permuted_witness() {
        let t = toy();
        // Same trellis with the two level-1 vertices swapped.
        let mut b = TrellisBuilder::new(2);
        b.add_vertex(0, bv("0"));
        b.add_vertex(1, bv("1"));
        b.add_vertex(1, bv("0"));
        b.add_edge(0, 0, 0, 1);
        b.add_edge(0, 0, 1, 0);
        b.add_edge(1, 1, 0, 0);
        b.add_edge(1, 0, 1, 0);
        let other = b.finish().unwrap();
        match t.isomorphic(&other, 10_000).unwrap() {
            IsoOutcome::Isomorphic(w) => {
                assert_eq!(w.map[1], vec![1, 0]);
                assert_eq!(w.label_linear, Some(true));
            }
            other => panic!("expected isomorphism, got {other:?}"),
        }
    }

    #[test]
    fn isomorphism_rejects_different_symbol_structure() {
        let t = toy();
        let mut b = TrellisBuilder::new(2);
        b.add_vertex(0, bv("0"));
        b.add_vertex(1, bv("0"));
        b.add_vertex(1, bv("1"));
        b.add_edge(0, 0, 0, 0);
        b.add_edge(0, 0, 1, 1);
        b.add_edge(1, 0, 1, 0); // symbols of the closing section flipped
        b.add_edge(1, 1, 0, 0);
        let other = b.finish().unwrap();
        match t.isomorphic(&other, 10_000).unwrap() {
            IsoOutcome::NotIsomorphic { .. } => {}
            other => panic!("expected a mismatch, got {other:?}"),
        }
    }

    #[test]
    fn isomorphism_budget_is_enforced() {
        let t = toy();
        let err = t.isomorphic(&t.clone(), 0).unwrap_err();
        assert!(matches!(err, Error::SearchBudget { budget: 0 }));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let t = toy();
        let json = t.to_json();
        let back = Trellis::from_json(&json).unwrap();
        assert!(t.identical(&back));
        assert_eq!(json, back.to_json());
    }

    #[test]
    fn from_json_rejects_broken_ordinals() {
        let t = toy();
        let json = t.to_json().replace("\"ordinal\": 0", "\"ordinal\": 9");
        let err = Trellis::from_json(&json).unwrap_err();
        assert!(matches!(err, Error::InvalidTrellis(_)));
    }

    #[test]
    fn dot_line_count_matches_profile() {
        let t = toy();
        let dot = t.to_dot();
        let nonempty_levels = (0..t.depth()).filter(|&l| t.vertex_count(l) > 0).count();
        let expected = 2 + nonempty_levels + t.total_vertices() + t.total_edges() + 1;
        assert_eq!(dot.lines().count(), expected);
        assert_eq!(dot, t.to_dot());
    }
}
