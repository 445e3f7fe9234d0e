//! Code specifications: generator and parity-check matrices plus the cyclic
//! coordinate span of every generator row.
//!
//! Coordinates are numbered `1..=n`. A span is stored closed on both ends:
//! `[a, b]` with `a <= b` is a conventional interval, `a > b` wraps past
//! coordinate `n` and is called circular. Span files may instead use the
//! half-open zero-based form `(a,b]`, which [`convert_span`] maps onto the
//! closed form by shifting both endpoints up by one.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::{self, BitMatrix, BitVector};

/// Whether a span stays inside `1..=n` or wraps around.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpanKind {
    Conventional,
    Circular,
}

/// A closed cyclic coordinate interval `[start, end]`, one based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    start: usize,
    end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Result<Self> {
        if start == 0 || end == 0 {
            return Err(Error::InvalidSpec(format!(
                "span {start}..{end}: coordinates are one based"
            )));
        }
        Ok(Span { start, end })
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self) -> usize {
        self.end
    }

    pub fn kind(&self) -> SpanKind {
        if self.start <= self.end {
            SpanKind::Conventional
        } else {
            SpanKind::Circular
        }
    }

    /// Membership of a one-based coordinate.
    pub fn contains(&self, pos: usize) -> bool {
        match self.kind() {
            SpanKind::Conventional => self.start <= pos && pos <= self.end,
            SpanKind::Circular => pos >= self.start || pos <= self.end,
        }
    }

    /// True when every coordinate of a length-`n` word lies in the span.
    pub fn covers_all(&self, n: usize) -> bool {
        match self.kind() {
            SpanKind::Conventional => self.start == 1 && self.end == n,
            SpanKind::Circular => self.end + 1 == self.start,
        }
    }

    /// Number of coordinates covered.
    pub fn len(&self, n: usize) -> usize {
        match self.kind() {
            SpanKind::Conventional => self.end - self.start + 1,
            SpanKind::Circular => n - self.start + 1 + self.end,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

/// Converts a half-open zero-based span `(a, b]` into the closed one-based
/// form. The map `(a, b] -> [a+1, b+1]` is a bijection between valid
/// half-open spans (`a != b`, both below `n`) and the closed spans that do
/// not degenerate to a single coordinate.
pub fn convert_span(a: usize, b: usize, n: usize) -> Result<Span> {
    if a >= n || b >= n {
        return Err(Error::InvalidSpec(format!(
            "span ({a},{b}]: endpoints must lie in 0..{n}"
        )));
    }
    if a == b {
        return Err(Error::InvalidSpec(format!(
            "span ({a},{b}]: endpoints must differ"
        )));
    }
    Span::new(a + 1, b + 1)
}

/// Inverse of [`convert_span`]. Fails for single-coordinate spans, which
/// have no half-open representation.
pub fn span_to_semiopen(span: &Span) -> Result<(usize, usize)> {
    if span.start == span.end {
        return Err(Error::InvalidSpec(format!(
            "span {span} covers a single coordinate and has no half-open form"
        )));
    }
    Ok((span.start - 1, span.end - 1))
}

/// An ordered list of spans together with the word length they refer to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanList {
    n: usize,
    spans: Vec<Span>,
}

impl SpanList {
    pub fn new(spans: Vec<Span>, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSpec(format!(
                "word length {n} is too short for cyclic spans"
            )));
        }
        for (i, s) in spans.iter().enumerate() {
            if s.start > n || s.end > n {
                return Err(Error::InvalidSpec(format!(
                    "row {}: span {s} exceeds word length {n}",
                    i + 1
                )));
            }
        }
        Ok(SpanList { n, spans })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.spans.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    /// # Panics
    /// Panics if `row` is out of range.
    pub fn get(&self, row: usize) -> &Span {
        &self.spans[row]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Span> {
        self.spans.iter()
    }

    pub fn starts(&self) -> Vec<usize> {
        self.spans.iter().map(|s| s.start).collect()
    }

    pub fn ends(&self) -> Vec<usize> {
        self.spans.iter().map(|s| s.end).collect()
    }
}

impl fmt::Display for SpanList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.spans.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Everything needed to build a trellis: `G`, `H` and one span per row
/// of `G`. Shapes are enforced at construction; semantic requirements are
/// reported by [`CodeSpec::validate`].
#[derive(Clone, Debug)]
pub struct CodeSpec {
    g: BitMatrix,
    h: BitMatrix,
    spans: SpanList,
}

impl CodeSpec {
    pub fn new(g: BitMatrix, h: BitMatrix, spans: SpanList) -> Result<Self> {
        let n = g.cols();
        if n < 2 {
            return Err(Error::InvalidSpec(format!(
                "word length {n} is too short"
            )));
        }
        if h.cols() != n {
            return Err(Error::InvalidSpec(format!(
                "generator has {n} columns but parity-check has {}",
                h.cols()
            )));
        }
        if g.rows() > n {
            return Err(Error::InvalidSpec(format!(
                "generator has more rows ({}) than columns ({n})",
                g.rows()
            )));
        }
        if h.rows() != n - g.rows() {
            return Err(Error::InvalidSpec(format!(
                "parity-check has {} rows, expected {}",
                h.rows(),
                n - g.rows()
            )));
        }
        if spans.n() != n {
            return Err(Error::InvalidSpec(format!(
                "span list is for word length {}, expected {n}",
                spans.n()
            )));
        }
        if spans.len() != g.rows() {
            return Err(Error::InvalidSpec(format!(
                "span list has {} entries, expected one per generator row ({})",
                spans.len(),
                g.rows()
            )));
        }
        Ok(CodeSpec { g, h, spans })
    }

    pub fn n(&self) -> usize {
        self.g.cols()
    }

    pub fn k(&self) -> usize {
        self.g.rows()
    }

    pub fn g(&self) -> &BitMatrix {
        &self.g
    }

    pub fn h(&self) -> &BitMatrix {
        &self.h
    }

    pub fn spans(&self) -> &SpanList {
        &self.spans
    }

    /// Checks the semantic requirements and collects human-readable
    /// findings instead of failing on the first one. `violations` make the
    /// specification unusable; `notes` flag unusual but legal inputs.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let (n, k) = (self.n(), self.k());

        let g_rank = gf2::rank(&self.g);
        if g_rank != k {
            report
                .violations
                .push(format!("generator matrix has rank {g_rank}, expected {k}"));
        }
        let h_rank = gf2::rank(&self.h);
        if h_rank != n - k {
            report.violations.push(format!(
                "parity-check matrix has rank {h_rank}, expected {}",
                n - k
            ));
        }
        for gi in 0..k {
            for hi in 0..self.h.rows() {
                if self.g.row(gi).dot(&self.h.row(hi)) {
                    report.violations.push(format!(
                        "generator row {} is not orthogonal to parity-check row {}",
                        gi + 1,
                        hi + 1
                    ));
                }
            }
        }
        for row in 0..k {
            let g_row = self.g.row(row);
            if g_row.is_zero() {
                report
                    .violations
                    .push(format!("row {}: generator row is zero", row + 1));
                continue;
            }
            let span = self.spans.get(row);
            for pos in g_row.support() {
                if !span.contains(pos + 1) {
                    report.violations.push(format!(
                        "row {}: position {} lies outside span {span}",
                        row + 1,
                        pos + 1
                    ));
                }
            }
            if span.start == span.end {
                report.notes.push(format!(
                    "row {}: span {span} covers a single coordinate",
                    row + 1
                ));
            }
        }
        if k == 0 {
            report.notes.push("zero code: no generator rows".into());
        } else {
            for col in 0..n {
                if self.g.column(col).is_zero() {
                    report.violations.push(format!(
                        "column {} of the generator matrix is zero",
                        col + 1
                    ));
                }
            }
        }
        let starts = self.spans.starts();
        let ends = self.spans.ends();
        for i in 0..k {
            for j in i + 1..k {
                if starts[i] == starts[j] {
                    report.notes.push(format!(
                        "rows {} and {} share span start {}",
                        i + 1,
                        j + 1,
                        starts[i]
                    ));
                }
                if ends[i] == ends[j] {
                    report.notes.push(format!(
                        "rows {} and {} share span end {}",
                        i + 1,
                        j + 1,
                        ends[i]
                    ));
                }
            }
        }
        report
    }

    /// Errors out with the first violation if the specification is invalid.
    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        match report.violations.first() {
            None => Ok(()),
            Some(first) => Err(Error::InvalidSpec(first.clone())),
        }
    }
}

/// Outcome of [`CodeSpec::validate`].
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A square matrix whose rows are candidate generators, one per span start,
/// together with their spans. Row selections are taken from it by
/// [`select_rows`].
#[derive(Clone, Debug)]
pub struct CharacteristicInput {
    matrix: BitMatrix,
    spans: SpanList,
}

impl CharacteristicInput {
    pub fn new(matrix: BitMatrix, spans: SpanList) -> Result<Self> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::InvalidSpec(format!(
                "characteristic matrix must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if spans.n() != matrix.cols() || spans.len() != matrix.rows() {
            return Err(Error::InvalidSpec(
                "characteristic matrix and span list sizes disagree".into(),
            ));
        }
        Ok(CharacteristicInput { matrix, spans })
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    pub fn spans(&self) -> &SpanList {
        &self.spans
    }
}

/// Picks the given one-based rows out of a characteristic matrix, keeping
/// their spans. The selection must be duplicate-free and linearly
/// independent.
pub fn select_rows(
    input: &CharacteristicInput,
    rows: &[usize],
) -> Result<(BitMatrix, SpanList)> {
    let n = input.matrix.rows();
    let mut seen = vec![false; n];
    let mut picked = Vec::with_capacity(rows.len());
    let mut spans = Vec::with_capacity(rows.len());
    for &r in rows {
        if r == 0 || r > n {
            return Err(Error::InvalidSpec(format!(
                "row selection {r} out of range 1..={n}"
            )));
        }
        if seen[r - 1] {
            return Err(Error::InvalidSpec(format!("row {r} selected twice")));
        }
        seen[r - 1] = true;
        picked.push(input.matrix.row(r - 1));
        spans.push(*input.spans.get(r - 1));
    }
    if picked.is_empty() {
        return Err(Error::InvalidSpec("empty row selection".into()));
    }
    let g = BitMatrix::from_rows(&picked)?;
    let r = gf2::rank(&g);
    if r != picked.len() {
        return Err(Error::RankDeficient(format!(
            "selected {} rows but their rank is only {r}",
            picked.len()
        )));
    }
    Ok((g, SpanList::new(spans, n)?))
}

/// All `(message, codeword)` pairs of the code, message ascending.
pub fn enumerate_codewords(spec: &CodeSpec) -> Result<Vec<(BitVector, BitVector)>> {
    let mut out = Vec::new();
    for u in gf2::enumerate_space(spec.k())? {
        let c = gf2::multiply(&u, spec.g())?;
        out.push((u, c));
    }
    Ok(out)
}

/// A basis of the dual code, computed as the right kernel of `g`. Useful
/// when only a generator matrix is at hand.
pub fn derive_parity(g: &BitMatrix) -> Result<BitMatrix> {
    let basis = gf2::kernel_basis(&g.transpose());
    if basis.is_empty() {
        return Err(Error::InvalidSpec(
            "generator spans the whole space; the dual code is trivial".into(),
        ));
    }
    BitMatrix::from_rows(&basis)
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn tokens_with_offsets(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out
}

/// Parses a whitespace-separated 0/1 matrix. Blank lines are skipped; every
/// remaining line is one row and all rows must have equal length.
pub fn parse_matrix(text: &str) -> Result<BitMatrix> {
    let mut rows: Vec<BitVector> = Vec::new();
    let mut expected: Option<usize> = None;
    let mut row_no = 0usize;
    for (line_idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        row_no += 1;
        let mut bits = Vec::new();
        for (offset, token) in tokens_with_offsets(line) {
            match token {
                "0" => bits.push(false),
                "1" => bits.push(true),
                other => {
                    return Err(parse_error(
                        line_idx + 1,
                        offset + 1,
                        format!("expected '0' or '1', found {other:?}"),
                    ))
                }
            }
        }
        if let Some(e) = expected {
            if bits.len() != e {
                return Err(parse_error(
                    line_idx + 1,
                    1,
                    format!("row {row_no}: expected {e} entries, got {}", bits.len()),
                ));
            }
        } else {
            expected = Some(bits.len());
        }
        rows.push(BitVector::from_bools(bits));
    }
    if rows.is_empty() {
        return Err(parse_error(1, 1, "matrix file is empty"));
    }
    BitMatrix::from_rows(&rows)
}

/// Parses a span file. The first non-blank line declares the convention:
/// either `closed` (lines like `4..7`, one based, both ends included) or
/// `semiopen` (lines like `(3,6]`, zero based, converted on the fly).
pub fn parse_span_list(text: &str, n: usize) -> Result<SpanList> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let Some((header_idx, header)) = lines.next() else {
        return Err(parse_error(1, 1, "span file is empty"));
    };
    let convention = header.trim();
    let mut spans = Vec::new();
    match convention {
        "closed" => {
            for (idx, line) in lines {
                let body = line.trim();
                let Some((a, b)) = body.split_once("..") else {
                    return Err(parse_error(
                        idx + 1,
                        1,
                        format!("expected a span like '4..7', found {body:?}"),
                    ));
                };
                let start = parse_coordinate(a.trim(), idx + 1)?;
                let end = parse_coordinate(b.trim(), idx + 1)?;
                spans.push(Span::new(start, end)?);
            }
        }
        "semiopen" => {
            for (idx, line) in lines {
                let body = line.trim();
                let inner = body
                    .strip_prefix('(')
                    .and_then(|s| s.strip_suffix(']'))
                    .ok_or_else(|| {
                        parse_error(
                            idx + 1,
                            1,
                            format!("expected a span like '(3,6]', found {body:?}"),
                        )
                    })?;
                let Some((a, b)) = inner.split_once(',') else {
                    return Err(parse_error(
                        idx + 1,
                        1,
                        format!("expected a comma inside {body:?}"),
                    ));
                };
                let a = parse_coordinate_zero(a.trim(), idx + 1)?;
                let b = parse_coordinate_zero(b.trim(), idx + 1)?;
                spans.push(convert_span(a, b, n)?);
            }
        }
        other => {
            return Err(parse_error(
                header_idx + 1,
                1,
                format!("unknown span convention {other:?}, expected 'closed' or 'semiopen'"),
            ))
        }
    }
    SpanList::new(spans, n)
}

fn parse_coordinate(token: &str, line: usize) -> Result<usize> {
    let v: usize = token
        .parse()
        .map_err(|_| parse_error(line, 1, format!("invalid coordinate {token:?}")))?;
    if v == 0 {
        return Err(parse_error(line, 1, "closed spans are one based"));
    }
    Ok(v)
}

fn parse_coordinate_zero(token: &str, line: usize) -> Result<usize> {
    token
        .parse()
        .map_err(|_| parse_error(line, 1, format!("invalid coordinate {token:?}")))
}
