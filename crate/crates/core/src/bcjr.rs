//! Syndrome-labeled tail-biting trellis construction.
//!
//! For a spec `(G, H, spans)` the chain of state matrices is
//!
//! ```text
//! N_0 = Theta,    N_i = N_{i-1} + g_i * h_i^T   (columns i of G and H),
//! ```
//!
//! where the displacement matrix `Theta` accumulates, for every generator
//! row, the parity contribution of the row's tail from its span start to
//! coordinate `n`. Rows with conventional spans contribute zero. A message
//! `u` sits at state `u * N_i` after `i` symbols, so `N_n` closes back to
//! `N_0` and the path of every codeword is a cycle.

use std::collections::HashMap;

use crate::code::CodeSpec;
use crate::error::{Error, Result};
use crate::gf2::{self, BitMatrix, BitVector, EXHAUSTIVE_LIMIT};
use crate::trellis::{Trellis, TrellisBuilder};

/// The `k x (n-k)` displacement matrix; row `l` is the displacement of
/// generator row `l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Displacement {
    matrix: BitMatrix,
}

impl Displacement {
    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    /// Displacement of generator row `l` (zero based).
    pub fn row(&self, l: usize) -> BitVector {
        self.matrix.row(l)
    }
}

/// Computes the displacement matrix of a valid specification.
pub fn displacement_matrix(spec: &CodeSpec) -> Result<Displacement> {
    spec.ensure_valid()?;
    let (n, k) = (spec.n(), spec.k());
    let r = n - k;
    let mut matrix = BitMatrix::zeros(k, r);
    for l in 0..k {
        let start = spec.spans().get(l).start();
        let mut d = BitVector::zeros(r);
        for j in start..=n {
            if spec.g().get(l, j - 1) {
                d = d.xor(&spec.h().column(j - 1));
            }
        }
        for c in 0..r {
            matrix.set(l, c, d.get(c));
        }
    }
    Ok(Displacement { matrix })
}

/// Displacement of the codeword with message coefficients `coeffs`: the
/// sum of the per-row displacements selected by `coeffs`.
pub fn displacement_vector(spec: &CodeSpec, coeffs: &BitVector) -> Result<BitVector> {
    let theta = displacement_matrix(spec)?;
    gf2::multiply(coeffs, theta.matrix())
}

/// The matrices `N_0 ..= N_n`; the last entry equals the first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateMatrixChain {
    mats: Vec<BitMatrix>,
}

impl StateMatrixChain {
    /// Number of trellis levels (`n`).
    pub fn n(&self) -> usize {
        self.mats.len() - 1
    }

    pub fn k(&self) -> usize {
        self.mats[0].rows()
    }

    /// `N_i` for `i` in `0..=n`.
    ///
    /// # Panics
    /// Panics if `i > n`.
    pub fn matrix(&self, i: usize) -> &BitMatrix {
        &self.mats[i]
    }

    /// The transposed chain, which generates the dual-code trellis.
    pub fn transposed(&self) -> StateMatrixChain {
        StateMatrixChain {
            mats: self.mats.iter().map(BitMatrix::transpose).collect(),
        }
    }

    /// Concatenation `(N_{i-1} | g_i | N_i)` used for edge-space ranks,
    /// built from the chain and the `i`-th column of `gen` (`i` in
    /// `1..=n`).
    pub fn edge_matrix(&self, gen: &BitMatrix, i: usize) -> Result<BitMatrix> {
        let col = BitMatrix::from_column(&gen.column(i - 1));
        BitMatrix::hconcat(&[self.matrix(i - 1), &col, self.matrix(i)])
    }
}

/// Builds the state-matrix chain incrementally from the displacement.
pub fn state_matrices(spec: &CodeSpec) -> Result<StateMatrixChain> {
    let theta = displacement_matrix(spec)?;
    let n = spec.n();
    let mut mats = Vec::with_capacity(n + 1);
    mats.push(theta.matrix().clone());
    for i in 1..=n {
        let g_col = spec.g().column(i - 1);
        let h_col = spec.h().column(i - 1);
        let step = BitMatrix::outer(&g_col, &h_col);
        mats.push(mats[i - 1].xor(&step));
    }
    debug_assert_eq!(
        mats[0], mats[n],
        "orthogonality of G and H must close the chain"
    );
    Ok(StateMatrixChain { mats })
}

/// The state of message `u` at level `i`: `u * N_i`.
pub fn codeword_state(spec: &CodeSpec, u: &BitVector, i: usize) -> Result<BitVector> {
    let chain = state_matrices(spec)?;
    gf2::multiply(u, chain.matrix(i))
}

/// Walks every message through a state chain and records the visited
/// states as vertices. Ordinals are assigned by first appearance in
/// ascending message order; edge `i` of message `u` is labeled with the
/// `i`-th symbol of `u * gen`.
fn build_from_chain(gen: &BitMatrix, chain: &StateMatrixChain) -> Result<Trellis> {
    let n = chain.n();
    let k = chain.k();
    if k > EXHAUSTIVE_LIMIT {
        return Err(Error::CapacityExceeded {
            dim: k,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let mut builder = TrellisBuilder::new(n);
    let mut index: Vec<HashMap<BitVector, usize>> = vec![HashMap::new(); n];
    for u in gf2::enumerate_space(k)? {
        let word = gf2::multiply(&u, gen)?;
        let mut ordinals = Vec::with_capacity(n);
        for level in 0..n {
            let state = gf2::multiply(&u, chain.matrix(level))?;
            let next = index[level].len();
            let ordinal = *index[level].entry(state.clone()).or_insert(next);
            if ordinal == next {
                builder.add_vertex(level, state);
            }
            ordinals.push(ordinal);
        }
        for section in 0..n {
            let head = ordinals[(section + 1) % n];
            let symbol = u8::from(word.get(section));
            builder.add_edge(section, ordinals[section], symbol, head);
        }
    }
    builder.finish()
}

/// The syndrome-labeled tail-biting trellis of the code.
pub fn build_tbbcjr(spec: &CodeSpec) -> Result<Trellis> {
    let chain = state_matrices(spec)?;
    build_from_chain(spec.g(), &chain)
}

/// The dual trellis: messages range over the dual code (generated by `H`)
/// and states are labeled by the transposed chain. Its label code is the
/// dual code.
pub fn build_dual(spec: &CodeSpec) -> Result<Trellis> {
    let chain = state_matrices(spec)?.transposed();
    build_from_chain(spec.h(), &chain)
}
