//! Product construction from per-row elementary trellises.
//!
//! Every generator row with its span yields a two-cycle elementary
//! trellis: one state everywhere outside the span's interior, two states
//! at the levels the span strictly surrounds. The product of all `k`
//! elementary trellises has diagonal state matrices `M_i` whose diagonal
//! holds the per-row activity bits, and its vertices are exactly the
//! message-space cosets of `ker M_i`.
//!
//! Activity is computed in the closed one-based convention: row `l` is
//! active at level `i` when coordinates `i` and `i+1` (cyclically, with
//! level 0 reading coordinates `n` and `1`) both lie inside the span.
//! Spans covering every coordinate are a special case: they are inactive
//! exactly at the level just before their start, where the two-state
//! cycle closes. Each activity bit is cross-checked against the half-open
//! zero-based interval rule, so the two span conventions cannot drift
//! apart silently.

use crate::algebraic;
use crate::bcjr;
use crate::code::{CodeSpec, Span, SpanList};
use crate::error::{Error, Result};
use crate::gf2::{self, BitMatrix, BitVector, EXHAUSTIVE_LIMIT};
use crate::trellis::{Trellis, TrellisBuilder};

/// Activity of one span at one level, in the closed-span convention.
fn activity_closed(span: &Span, n: usize, level: usize) -> bool {
    if span.covers_all(n) {
        return level != span.start() - 1;
    }
    let first = if level == 0 { n } else { level };
    span.contains(first) && span.contains(level + 1)
}

/// The same activity bit from the half-open zero-based interval
/// `(start-1, end-1]`, which is empty for single-coordinate spans.
fn activity_semiopen(span: &Span, level: usize) -> bool {
    let a = span.start() - 1;
    let b = span.end() - 1;
    if a == b {
        return false;
    }
    if a < b {
        a < level && level <= b
    } else {
        level > a || level <= b
    }
}

/// The diagonal state matrices `M_0 ..= M_n` of a span list, stored as
/// per-level activity bits (`mu(i, l)` is the `l`-th diagonal entry of
/// `M_i`). The last level aliases the first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalStateChain {
    n: usize,
    mu: Vec<Vec<bool>>,
}

impl DiagonalStateChain {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.mu[0].len()
    }

    /// # Panics
    /// Panics if `level > n` or `row >= k`.
    pub fn mu(&self, level: usize, row: usize) -> bool {
        self.mu[level][row]
    }

    /// `M_i` as a diagonal matrix.
    pub fn matrix(&self, level: usize) -> BitMatrix {
        BitMatrix::diagonal(&self.mu[level])
    }

    /// Basis of `ker M_i`: the unit vectors of the inactive rows.
    pub fn kernel_basis(&self, level: usize) -> Vec<BitVector> {
        let k = self.k();
        (0..k)
            .filter(|&l| !self.mu[level][l])
            .map(|l| BitVector::unit(k, l))
            .collect()
    }

    /// Full kernel of `M_i`, sorted.
    pub fn kernel_set(&self, level: usize) -> Result<Vec<BitVector>> {
        let basis = self.kernel_basis(level);
        if basis.is_empty() {
            return Ok(vec![BitVector::zeros(self.k())]);
        }
        gf2::span_set(&basis)
    }
}

/// Computes the diagonal state chain of a span list.
///
/// # Panics
/// Panics if the closed-convention and half-open-convention activity
/// rules ever disagree, which would mean the span conversion is broken.
pub fn kv_state_matrices(spans: &SpanList) -> DiagonalStateChain {
    let n = spans.n();
    let mut mu = Vec::with_capacity(n + 1);
    for level in 0..n {
        let row: Vec<bool> = spans
            .iter()
            .map(|s| {
                let closed = activity_closed(s, n, level);
                assert_eq!(
                    closed,
                    activity_semiopen(s, level),
                    "span convention rules disagree for {s} at level {level}"
                );
                closed
            })
            .collect();
        mu.push(row);
    }
    mu.push(mu[0].clone());
    DiagonalStateChain { n, mu }
}

/// The two-cycle trellis of a single generator row.
#[derive(Clone, Debug)]
pub struct ElementaryTrellis {
    generator: BitVector,
    span: Span,
    active: Vec<bool>,
}

impl ElementaryTrellis {
    pub fn generator(&self) -> &BitVector {
        &self.generator
    }

    pub fn span(&self) -> &Span {
        &self.span
    }

    pub fn n(&self) -> usize {
        self.generator.len()
    }

    /// 1 or 2 states at the given level.
    pub fn vertex_count(&self, level: usize) -> usize {
        if self.active[level] {
            2
        } else {
            1
        }
    }

    pub fn is_active(&self, level: usize) -> bool {
        self.active[level]
    }

    /// The `(tail, symbol, head)` state edges of one section: the all-zero
    /// cycle plus the generator cycle, collapsed when they coincide.
    pub fn section(&self, section: usize) -> Vec<(u8, u8, u8)> {
        let n = self.n();
        let zero = (0u8, 0u8, 0u8);
        let gen = (
            u8::from(self.active[section]),
            u8::from(self.generator.get(section)),
            u8::from(self.active[(section + 1) % n]),
        );
        if gen == zero {
            vec![zero]
        } else {
            vec![zero, gen]
        }
    }

    /// The elementary trellis as a standalone [`Trellis`], labels being
    /// one-bit state names. Its label code is the zero word plus the
    /// generator row.
    pub fn to_trellis(&self) -> Result<Trellis> {
        let n = self.n();
        let mut b = TrellisBuilder::new(n);
        for level in 0..n {
            b.add_vertex(level, BitVector::zeros(1));
            if self.active[level] {
                b.add_vertex(level, BitVector::unit(1, 0));
            }
        }
        for section in 0..n {
            for (tail, symbol, head) in self.section(section) {
                b.add_edge(section, tail as usize, symbol, head as usize);
            }
        }
        b.finish()
    }
}

/// Builds the elementary trellis of one generator row and its span.
pub fn elementary_trellis(generator: &BitVector, span: &Span) -> Result<ElementaryTrellis> {
    let n = generator.len();
    if n < 2 {
        return Err(Error::InvalidSpec(format!(
            "generator length {n} is too short"
        )));
    }
    if generator.is_zero() {
        return Err(Error::BadGeneratorRow {
            row: 1,
            message: "generator row is zero".into(),
        });
    }
    if span.start() > n || span.end() > n {
        return Err(Error::InvalidSpec(format!(
            "span {span} exceeds word length {n}"
        )));
    }
    for pos in generator.support() {
        if !span.contains(pos + 1) {
            return Err(Error::BadGeneratorRow {
                row: 1,
                message: format!("position {} lies outside span {span}", pos + 1),
            });
        }
    }
    let active = (0..n).map(|level| {
        let closed = activity_closed(span, n, level);
        debug_assert_eq!(closed, activity_semiopen(span, level));
        closed
    });
    Ok(ElementaryTrellis {
        generator: generator.clone(),
        span: *span,
        active: active.collect(),
    })
}

/// Componentwise product of elementary trellises. Level-`i` vertices are
/// tuples over the components active there, encoded as full `k`-bit
/// labels (inactive components read zero) and ordered with component 0
/// most significant; edges combine one component edge each and XOR their
/// symbols.
pub fn product_trellis(components: &[ElementaryTrellis]) -> Result<Trellis> {
    let k = components.len();
    let Some(first) = components.first() else {
        return Err(Error::InvalidSpec("product of no components".into()));
    };
    if k > EXHAUSTIVE_LIMIT {
        return Err(Error::CapacityExceeded {
            dim: k,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let n = first.n();
    for c in components {
        if c.n() != n {
            return Err(Error::InvalidSpec(format!(
                "component lengths disagree: {} vs {n}",
                c.n()
            )));
        }
    }

    let active_rows = |level: usize| -> Vec<usize> {
        (0..k).filter(|&l| components[l].is_active(level)).collect()
    };

    let mut builder = TrellisBuilder::new(n);
    for level in 0..n {
        let active = active_rows(level);
        for value in 0..1usize << active.len() {
            let mut label = BitVector::zeros(k);
            for (bit, &row) in active.iter().enumerate() {
                label.set(row, value >> (active.len() - 1 - bit) & 1 == 1);
            }
            builder.add_vertex(level, label);
        }
    }

    // Ordinal of a component state tuple: its bits over the active rows,
    // most significant first.
    let ordinal = |active: &[usize], states: &[u8]| -> usize {
        active
            .iter()
            .fold(0usize, |acc, &row| acc << 1 | states[row] as usize)
    };

    for section in 0..n {
        let tail_active = active_rows(section);
        let head_active = active_rows((section + 1) % n);
        let sections: Vec<Vec<(u8, u8, u8)>> =
            (0..k).map(|l| components[l].section(section)).collect();
        let mut choice = vec![0usize; k];
        loop {
            let mut tails = vec![0u8; k];
            let mut heads = vec![0u8; k];
            let mut symbol = 0u8;
            for l in 0..k {
                let (t, s, h) = sections[l][choice[l]];
                tails[l] = t;
                heads[l] = h;
                symbol ^= s;
            }
            builder.add_edge(
                section,
                ordinal(&tail_active, &tails),
                symbol,
                ordinal(&head_active, &heads),
            );
            // Advance the mixed-radix choice counter.
            let mut l = 0;
            loop {
                if l == k {
                    break;
                }
                choice[l] += 1;
                if choice[l] < sections[l].len() {
                    break;
                }
                choice[l] = 0;
                l += 1;
            }
            if l == k {
                break;
            }
        }
    }
    builder.finish()
}

/// Product trellis of a full specification, one component per row.
pub fn build_product(spec: &CodeSpec) -> Result<Trellis> {
    spec.ensure_valid()?;
    let mut components = Vec::with_capacity(spec.k());
    for l in 0..spec.k() {
        components.push(elementary_trellis(&spec.g().row(l), spec.spans().get(l))?);
    }
    product_trellis(&components)
}

/// Coset-quotient trellis over the kernels of the diagonal state
/// matrices: the same construction as [`algebraic::build_algebraic`] with
/// `M_i` in place of `N_i`.
pub fn build_kv_algebraic(spec: &CodeSpec) -> Result<Trellis> {
    spec.ensure_valid()?;
    let chain = kv_state_matrices(spec.spans());
    let mut kernels = Vec::with_capacity(spec.n());
    for i in 0..spec.n() {
        kernels.push(chain.kernel_set(i)?);
    }
    algebraic::build_from_kernels(spec, &kernels)
}

/// Per-level comparison of `ker M_i` and `ker N_i`.
#[derive(Clone, Debug)]
pub struct Lemma1Report {
    pub levels: Vec<Lemma1Level>,
}

#[derive(Clone, Debug)]
pub struct Lemma1Level {
    pub level: usize,
    pub dim_diagonal: usize,
    pub dim_state: usize,
    pub equal: bool,
}

impl Lemma1Report {
    pub fn all_equal(&self) -> bool {
        self.levels.iter().all(|l| l.equal)
    }
}

/// Checks, level by level, whether the diagonal matrices and the state
/// matrices cut out the same kernels. Equality holds when every generator
/// row is a shortest-span codeword for its span start, and can fail for
/// other selections; the report leaves the judgement to the caller.
pub fn check_lemma1(spec: &CodeSpec) -> Result<Lemma1Report> {
    spec.ensure_valid()?;
    let diag = kv_state_matrices(spec.spans());
    let chain = bcjr::state_matrices(spec)?;
    let mut levels = Vec::with_capacity(spec.n());
    for i in 0..spec.n() {
        let m_set = diag.kernel_set(i)?;
        let n_set = gf2::kernel_set(chain.matrix(i))?;
        levels.push(Lemma1Level {
            level: i,
            dim_diagonal: spec.k() - gf2::rank(&diag.matrix(i)),
            dim_state: gf2::kernel_basis(chain.matrix(i)).len(),
            equal: m_set == n_set,
        });
    }
    Ok(Lemma1Report { levels })
}
