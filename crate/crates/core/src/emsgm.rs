//! Direct construction from span activity sets.
//!
//! For a span list over positions `1..=n`, the position set `A_i` holds
//! the rows whose span contains position `i`, and the level set `B_i`
//! holds the rows active at level `i` in the sense of [`kv`]: both
//! neighbouring positions lie inside the span, except that a span
//! covering every position skips the level just before its start. When
//! the span starts are pairwise distinct and likewise the span ends, the
//! generator matrix is an extended minimal-span generator matrix
//! (e-MSGM) and the trellis can be read off the activity sets alone:
//! `2^|B_i|` vertices at level `i` and `2^|A_i|` edges at position `i`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::code::{CodeSpec, SpanList};
use crate::error::{Error, Result};
use crate::gf2::{BitVector, EXHAUSTIVE_LIMIT};
use crate::kv::{self, DiagonalStateChain};
use crate::trellis::{Trellis, TrellisBuilder};

/// Position sets `A_1 ..= A_n` and level sets `B_0 ..= B_{n-1}` of a span
/// list, holding zero-based row indices. Index 0 of the position sets
/// aliases `A_n`; index `n` of the level sets aliases `B_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActivityTable {
    n: usize,
    k: usize,
    a: Vec<BTreeSet<usize>>,
    b: Vec<BTreeSet<usize>>,
}

impl ActivityTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Rows whose span contains position `i`. Positions are one based;
    /// `a_set(0)` aliases `a_set(n)`.
    ///
    /// # Panics
    /// Panics if `i > n`.
    pub fn a_set(&self, i: usize) -> &BTreeSet<usize> {
        &self.a[i]
    }

    /// Rows active at level `i`; `b_set(n)` aliases `b_set(0)`.
    ///
    /// # Panics
    /// Panics if `i > n`.
    pub fn b_set(&self, i: usize) -> &BTreeSet<usize> {
        &self.b[i]
    }

    pub fn alpha(&self, i: usize) -> usize {
        self.a[i].len()
    }

    pub fn beta(&self, i: usize) -> usize {
        self.b[i].len()
    }

    /// Plain-text rendering with one-based row numbers.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "position  alpha  rows");
        for i in 1..=self.n {
            let _ = writeln!(s, "{:>8}  {:>5}  {}", i, self.alpha(i), set_text(&self.a[i]));
        }
        let _ = writeln!(s, "level  beta  rows");
        for i in 0..self.n {
            let _ = writeln!(s, "{:>5}  {:>4}  {}", i, self.beta(i), set_text(&self.b[i]));
        }
        s
    }
}

fn set_text(set: &BTreeSet<usize>) -> String {
    if set.is_empty() {
        return "-".into();
    }
    set.iter()
        .map(|l| (l + 1).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Computes the activity sets of a span list. The level sets are derived
/// from the position sets: `B_i` is `A_i` intersected with `A_{i+1}`,
/// with a row whose span covers everything removed at the single level
/// just before its span start.
pub fn activity_table(spans: &SpanList) -> ActivityTable {
    let n = spans.n();
    let k = spans.len();
    let mut a = vec![BTreeSet::new(); n + 1];
    for i in 1..=n {
        a[i] = (0..k).filter(|&l| spans.get(l).contains(i)).collect();
    }
    a[0] = a[n].clone();
    let mut b = Vec::with_capacity(n + 1);
    for i in 0..n {
        let before = &a[if i == 0 { n } else { i }];
        let after = &a[i + 1];
        let set: BTreeSet<usize> = before
            .intersection(after)
            .copied()
            .filter(|&l| {
                let span = spans.get(l);
                !(span.covers_all(n) && i == span.start() - 1)
            })
            .collect();
        b.push(set);
    }
    b.push(b[0].clone());
    ActivityTable { n, k, a, b }
}

/// Span-start and span-end collisions that disqualify a span list from
/// the e-MSGM construction.
#[derive(Clone, Debug, Default)]
pub struct EmsgmReport {
    /// Zero-based row pairs sharing a span start.
    pub duplicate_starts: Vec<(usize, usize)>,
    /// Zero-based row pairs sharing a span end.
    pub duplicate_ends: Vec<(usize, usize)>,
}

impl EmsgmReport {
    pub fn holds(&self) -> bool {
        self.duplicate_starts.is_empty() && self.duplicate_ends.is_empty()
    }

    /// One-based description of the first collision, empty when none.
    pub fn describe(&self) -> String {
        if let Some(&(i, j)) = self.duplicate_starts.first() {
            return format!("rows {} and {} share a span start", i + 1, j + 1);
        }
        if let Some(&(i, j)) = self.duplicate_ends.first() {
            return format!("rows {} and {} share a span end", i + 1, j + 1);
        }
        String::new()
    }
}

/// Checks whether the span starts are pairwise distinct and the span ends
/// are pairwise distinct.
pub fn is_emsgm(spans: &SpanList) -> EmsgmReport {
    let starts = spans.starts();
    let ends = spans.ends();
    let mut report = EmsgmReport::default();
    for i in 0..spans.len() {
        for j in i + 1..spans.len() {
            if starts[i] == starts[j] {
                report.duplicate_starts.push((i, j));
            }
            if ends[i] == ends[j] {
                report.duplicate_ends.push((i, j));
            }
        }
    }
    report
}

/// Builds the trellis straight from the activity sets: level `i` has one
/// vertex per assignment to the rows of `B_i`, position `i+1` has one
/// edge per assignment `w` to the rows of `A_{i+1}`, going from the
/// restriction of `w` onto `B_i` to its restriction onto `B_{i+1}` with
/// symbol `sum of w_l * g(l, i)`. Labels embed the assignments into `k`
/// bits; inside the ordinal of a level, the smallest active row is the
/// most significant bit.
pub fn build_emsgm(spec: &CodeSpec) -> Result<Trellis> {
    spec.ensure_valid()?;
    let report = is_emsgm(spec.spans());
    if !report.holds() {
        return Err(Error::NotEmsgm(report.describe()));
    }
    let (n, k) = (spec.n(), spec.k());
    if k > EXHAUSTIVE_LIMIT {
        return Err(Error::CapacityExceeded {
            dim: k,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let table = activity_table(spec.spans());

    let mut builder = TrellisBuilder::new(n);
    for level in 0..n {
        let rows: Vec<usize> = table.b_set(level).iter().copied().collect();
        for value in 0..1usize << rows.len() {
            builder.add_vertex(level, embed(value, &rows, k));
        }
    }
    for section in 0..n {
        let active: Vec<usize> = table.a_set(section + 1).iter().copied().collect();
        let tail_rows: Vec<usize> = table.b_set(section).iter().copied().collect();
        let head_rows: Vec<usize> = table.b_set(section + 1).iter().copied().collect();
        for value in 0..1usize << active.len() {
            let w = embed(value, &active, k);
            let symbol = active
                .iter()
                .fold(false, |acc, &l| acc ^ (w.get(l) & spec.g().get(l, section)));
            builder.add_edge(
                section,
                restrict(&w, &tail_rows),
                u8::from(symbol),
                restrict(&w, &head_rows),
            );
        }
    }
    builder.finish()
}

/// Spreads the bits of `value` over the given rows of a `k`-bit vector,
/// smallest row most significant.
fn embed(value: usize, rows: &[usize], k: usize) -> BitVector {
    let mut v = BitVector::zeros(k);
    for (bit, &row) in rows.iter().enumerate() {
        v.set(row, value >> (rows.len() - 1 - bit) & 1 == 1);
    }
    v
}

/// Ordinal of an assignment restricted to the given rows, smallest row
/// most significant.
fn restrict(w: &BitVector, rows: &[usize]) -> usize {
    rows.iter()
        .fold(0usize, |acc, &row| acc << 1 | usize::from(w.get(row)))
}

/// Disagreements between the level sets of an activity table and the
/// diagonal state matrices of the same span list.
#[derive(Clone, Debug, Default)]
pub struct BLemmaReport {
    /// `(level, row)` pairs where set membership and diagonal entry differ.
    pub mismatches: Vec<(usize, usize)>,
}

impl BLemmaReport {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Checks that row `l` lies in `B_i` exactly when the `l`-th diagonal
/// entry of `M_i` is one. The two sides are computed by independent
/// routes, so this guards the span bookkeeping on both.
pub fn check_b_lemma(spans: &SpanList) -> BLemmaReport {
    check_b_lemma_against(&activity_table(spans), &kv::kv_state_matrices(spans))
}

/// Same check against an externally supplied table and chain.
pub fn check_b_lemma_against(
    table: &ActivityTable,
    chain: &DiagonalStateChain,
) -> BLemmaReport {
    let mut report = BLemmaReport::default();
    for level in 0..table.n() {
        for row in 0..table.k() {
            if table.b_set(level).contains(&row) != chain.mu(level, row) {
                report.mismatches.push((level, row));
            }
        }
    }
    report
}
