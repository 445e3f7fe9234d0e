//! Dense linear algebra over GF(2).
//!
//! Vectors compare in ascending binary order with the leftmost component
//! most significant, so sorting a list of equal-length vectors enumerates
//! them as binary numbers. Kernels are always *left* kernels: the set of
//! row vectors `u` with `u * M = 0`.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest dimension for which the crate will expand a full `2^dim` listing.
pub const EXHAUSTIVE_LIMIT: usize = 20;

/// A bit row vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    bits: Vec<bool>,
}

impl BitVector {
    /// All-zero vector of the given length.
    pub fn zeros(len: usize) -> Self {
        BitVector {
            bits: vec![false; len],
        }
    }

    /// Standard basis vector with a one at `pos` (zero based).
    ///
    /// # Panics
    /// Panics if `pos >= len`.
    pub fn unit(len: usize, pos: usize) -> Self {
        assert!(pos < len, "unit position {pos} out of range for length {len}");
        let mut v = Self::zeros(len);
        v.set(pos, true);
        v
    }

    pub fn from_bools(bits: Vec<bool>) -> Self {
        BitVector { bits }
    }

    /// Vector of length `len` whose bits spell `value` in binary, most
    /// significant bit first.
    ///
    /// # Panics
    /// Panics if `len > 63` or `value >= 2^len`.
    pub fn from_index(value: usize, len: usize) -> Self {
        assert!(len <= 63, "length {len} too large for an index");
        assert!(value < 1usize << len, "value {value} does not fit in {len} bits");
        let bits = (0..len).map(|i| value >> (len - 1 - i) & 1 == 1).collect();
        BitVector { bits }
    }

    /// The integer whose binary digits are this vector, leftmost bit most
    /// significant. Inverse of [`BitVector::from_index`].
    ///
    /// # Panics
    /// Panics if the vector is longer than 63 bits.
    pub fn to_index(&self) -> usize {
        assert!(self.len() <= 63, "vector too long to index");
        self.bits
            .iter()
            .fold(0usize, |acc, &b| acc << 1 | usize::from(b))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// # Panics
    /// Panics if `pos` is out of range.
    pub fn get(&self, pos: usize) -> bool {
        self.bits[pos]
    }

    /// # Panics
    /// Panics if `pos` is out of range.
    pub fn set(&mut self, pos: usize, value: bool) {
        self.bits[pos] = value;
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    /// Zero-based positions of the nonzero entries.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.bits[i]).collect()
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&b| !b)
    }

    /// Componentwise sum.
    ///
    /// # Panics
    /// Panics if the lengths differ.
    pub fn xor(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "xor of unequal lengths");
        BitVector {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a ^ b)
                .collect(),
        }
    }

    /// Inner product.
    ///
    /// # Panics
    /// Panics if the lengths differ.
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.len(), other.len(), "dot of unequal lengths");
        self.bits
            .iter()
            .zip(&other.bits)
            .fold(false, |acc, (&a, &b)| acc ^ (a & b))
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => {
                    return Err(Error::Parse {
                        line: 1,
                        column: i + 1,
                        message: format!("expected '0' or '1', found {other:?}"),
                    })
                }
            }
        }
        Ok(BitVector { bits })
    }
}

impl Serialize for BitVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(|e| D::Error::custom(format!("{e}")))
    }
}

/// A dense bit matrix in row-major order. Zero-row and zero-column shapes
/// are allowed so degenerate codes keep working.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<bool>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows,
            cols,
            data: vec![false; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from equal-length rows. At least one row is required
    /// because an empty list does not determine the column count; use
    /// [`BitMatrix::zeros`] for empty shapes.
    pub fn from_rows(rows: &[BitVector]) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::InvalidSpec(
                "cannot infer column count from an empty row list".into(),
            ));
        };
        let cols = first.len();
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Parse {
                    line: r + 1,
                    column: 1,
                    message: format!("expected {cols} entries, got {}", row.len()),
                });
            }
            for c in 0..cols {
                m.set(r, c, row.get(c));
            }
        }
        Ok(m)
    }

    /// Rank-one product `u^T * v` of a column factor `u` and row factor `v`.
    pub fn outer(u: &BitVector, v: &BitVector) -> Self {
        let mut m = Self::zeros(u.len(), v.len());
        for r in 0..u.len() {
            if u.get(r) {
                for c in 0..v.len() {
                    m.set(r, c, v.get(c));
                }
            }
        }
        m
    }

    /// Single-column matrix holding `v`.
    pub fn from_column(v: &BitVector) -> Self {
        let mut m = Self::zeros(v.len(), 1);
        for r in 0..v.len() {
            m.set(r, 0, v.get(r));
        }
        m
    }

    /// Diagonal square matrix with the given diagonal.
    pub fn diagonal(diag: &[bool]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Side-by-side concatenation.
    pub fn hconcat(parts: &[&BitMatrix]) -> Result<Self> {
        let Some(first) = parts.first() else {
            return Err(Error::InvalidSpec("hconcat of no parts".into()));
        };
        let rows = first.rows;
        for p in parts {
            if p.rows != rows {
                return Err(Error::DimensionMismatch {
                    vector_len: p.rows,
                    matrix_rows: rows,
                });
            }
        }
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let mut offset = 0;
        for p in parts {
            for r in 0..rows {
                for c in 0..p.cols {
                    m.set(r, offset + c, p.get(r, c));
                }
            }
            offset += p.cols;
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// # Panics
    /// Panics if the position is out of range.
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        self.data[r * self.cols + c]
    }

    /// # Panics
    /// Panics if the position is out of range.
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> BitVector {
        BitVector::from_bools((0..self.cols).map(|c| self.get(r, c)).collect())
    }

    pub fn column(&self, c: usize) -> BitVector {
        BitVector::from_bools((0..self.rows).map(|r| self.get(r, c)).collect())
    }

    pub fn row_vectors(&self) -> Vec<BitVector> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Componentwise sum.
    ///
    /// # Panics
    /// Panics if the shapes differ.
    pub fn xor(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "xor of unequal shapes"
        );
        BitMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a ^ b)
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&b| !b)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            let (va, vb) = (self.get(a, c), self.get(b, c));
            self.set(a, c, vb);
            self.set(b, c, va);
        }
    }

    fn xor_row_into(&mut self, dst: usize, src: usize) {
        for c in 0..self.cols {
            let v = self.get(dst, c) ^ self.get(src, c);
            self.set(dst, c, v);
        }
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            if r > 0 {
                writeln!(f)?;
            }
            write!(f, "{}", self.row(r))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix({}x{}: ", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "/")?;
            }
            write!(f, "{}", self.row(r))?;
        }
        write!(f, ")")
    }
}

/// Row-vector by matrix product `u * M`.
pub fn multiply(u: &BitVector, m: &BitMatrix) -> Result<BitVector> {
    if u.len() != m.rows() {
        return Err(Error::DimensionMismatch {
            vector_len: u.len(),
            matrix_rows: m.rows(),
        });
    }
    let mut out = BitVector::zeros(m.cols());
    for r in 0..m.rows() {
        if u.get(r) {
            for c in 0..m.cols() {
                out.set(c, out.get(c) ^ m.get(r, c));
            }
        }
    }
    Ok(out)
}

pub fn transpose(m: &BitMatrix) -> BitMatrix {
    m.transpose()
}

/// Reduces `m` in place to reduced row echelon form, considering only the
/// first `limit_cols` columns for pivots. Pivoting is deterministic:
/// leftmost pivot column first, topmost available row. Returns the rank.
fn reduce_inplace(m: &mut BitMatrix, limit_cols: usize) -> usize {
    let mut pivot_row = 0;
    for col in 0..limit_cols {
        if pivot_row == m.rows() {
            break;
        }
        let Some(p) = (pivot_row..m.rows()).find(|&r| m.get(r, col)) else {
            continue;
        };
        m.swap_rows(pivot_row, p);
        for r in 0..m.rows() {
            if r != pivot_row && m.get(r, col) {
                m.xor_row_into(r, pivot_row);
            }
        }
        pivot_row += 1;
    }
    pivot_row
}

pub fn rank(m: &BitMatrix) -> usize {
    let mut copy = m.clone();
    reduce_inplace(&mut copy, m.cols())
}

/// Basis of the left kernel `{u : u * M = 0}`, computed by reducing the
/// augmented matrix `[M | I]` and keeping the bookkeeping part of the rows
/// whose `M` part vanished. Deterministic for a given input.
pub fn kernel_basis(m: &BitMatrix) -> Vec<BitVector> {
    let k = m.rows();
    if k == 0 {
        return Vec::new();
    }
    let mut aug = BitMatrix::hconcat(&[m, &BitMatrix::identity(k)])
        .expect("augmenting with an identity of matching height");
    let r = reduce_inplace(&mut aug, m.cols());
    (r..k)
        .map(|row| BitVector::from_bools((0..k).map(|c| aug.get(row, m.cols() + c)).collect()))
        .collect()
}

/// All `2^dim` vectors of the given length in ascending binary order.
pub fn enumerate_space(dim: usize) -> Result<Vec<BitVector>> {
    if dim > EXHAUSTIVE_LIMIT {
        return Err(Error::CapacityExceeded {
            dim,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    Ok((0..1usize << dim)
        .map(|v| BitVector::from_index(v, dim))
        .collect())
}

/// Every vector spanned by `basis`, sorted ascending. Duplicate combinations
/// collapse, so the result has `2^rank` entries even for dependent inputs.
pub fn span_set(basis: &[BitVector]) -> Result<Vec<BitVector>> {
    if basis.len() > EXHAUSTIVE_LIMIT {
        return Err(Error::CapacityExceeded {
            dim: basis.len(),
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let Some(first) = basis.first() else {
        return Ok(Vec::new());
    };
    let mut set = std::collections::BTreeSet::new();
    for mask in 0..1usize << basis.len() {
        let mut v = BitVector::zeros(first.len());
        for (i, b) in basis.iter().enumerate() {
            if mask >> i & 1 == 1 {
                v = v.xor(b);
            }
        }
        set.insert(v);
    }
    Ok(set.into_iter().collect())
}

/// The full left kernel of `m` as a sorted vector set.
pub fn kernel_set(m: &BitMatrix) -> Result<Vec<BitVector>> {
    let basis = kernel_basis(m);
    if basis.is_empty() {
        return Ok(vec![BitVector::zeros(m.rows())]);
    }
    span_set(&basis)
}
