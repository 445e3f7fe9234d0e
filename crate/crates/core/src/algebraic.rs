//! Coset-quotient construction of the tail-biting trellis.
//!
//! At every level the message space `F^k` is partitioned into cosets of
//! the left kernel of the state matrix; vertices are the cosets and each
//! message traces its codeword through them. The result is the
//! syndrome-labeled trellis up to relabeling, with coset representatives
//! as vertex labels.
//!
//! The same module also splits the code along conventional and circular
//! generator rows and exposes the per-coset partial-syndrome maps whose
//! zero sets recover the state-matrix kernels.

use std::collections::HashMap;

use crate::bcjr::{self, StateMatrixChain};
use crate::code::{CodeSpec, SpanKind};
use crate::error::{Error, Result};
use crate::gf2::{self, BitVector, EXHAUSTIVE_LIMIT};
use crate::trellis::{Trellis, TrellisBuilder};

/// A partition of `F^dim` into cosets of a subspace. Cosets are listed by
/// ascending representative; every coset is sorted and led by its minimum,
/// which serves as the representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetPartition {
    dim: usize,
    kernel: Vec<BitVector>,
    cosets: Vec<Vec<BitVector>>,
}

impl CosetPartition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The subspace being quotiented by, sorted ascending.
    pub fn kernel(&self) -> &[BitVector] {
        &self.kernel
    }

    pub fn cosets(&self) -> &[Vec<BitVector>] {
        &self.cosets
    }

    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    pub fn representative(&self, index: usize) -> &BitVector {
        &self.cosets[index][0]
    }

    pub fn representatives(&self) -> Vec<BitVector> {
        self.cosets.iter().map(|c| c[0].clone()).collect()
    }

    /// Index of the coset containing `u`.
    pub fn index_of(&self, u: &BitVector) -> Option<usize> {
        self.cosets
            .iter()
            .position(|c| c.binary_search(u).is_ok())
    }
}

/// Partitions `F^dim` by the given subspace, supplied as a full list of
/// its vectors. The input is checked for closure under addition; the
/// first missing sum is reported as a witness.
pub fn coset_partition(kernel: &[BitVector], dim: usize) -> Result<CosetPartition> {
    let mut sorted: Vec<BitVector> = kernel.to_vec();
    sorted.sort();
    sorted.dedup();
    for v in &sorted {
        if v.len() != dim {
            return Err(Error::InvalidSpec(format!(
                "kernel vector {v} has length {}, expected {dim}",
                v.len()
            )));
        }
    }
    if sorted.is_empty() || !sorted[0].is_zero() {
        return Err(Error::NotSubspace {
            a: "0".repeat(dim),
            b: "0".repeat(dim),
            sum: "0".repeat(dim),
        });
    }
    for a in &sorted {
        for b in &sorted {
            let sum = a.xor(b);
            if sorted.binary_search(&sum).is_err() {
                return Err(Error::NotSubspace {
                    a: a.to_string(),
                    b: b.to_string(),
                    sum: sum.to_string(),
                });
            }
        }
    }

    let all = gf2::enumerate_space(dim)?;
    let mut assigned = vec![false; all.len()];
    let mut cosets = Vec::new();
    for u in &all {
        if assigned[u.to_index()] {
            continue;
        }
        let mut coset: Vec<BitVector> = sorted.iter().map(|w| u.xor(w)).collect();
        coset.sort();
        for member in &coset {
            assigned[member.to_index()] = true;
        }
        cosets.push(coset);
    }
    Ok(CosetPartition {
        dim,
        kernel: sorted,
        cosets,
    })
}

/// Maps every message coset to the corresponding codeword coset,
/// preserving order.
pub fn to_codeword_cosets(
    spec: &CodeSpec,
    partition: &CosetPartition,
) -> Result<Vec<Vec<BitVector>>> {
    let mut out = Vec::with_capacity(partition.len());
    for coset in partition.cosets() {
        let mut words = Vec::with_capacity(coset.len());
        for u in coset {
            words.push(gf2::multiply(u, spec.g())?);
        }
        out.push(words);
    }
    Ok(out)
}

/// Quotient construction over an arbitrary per-level family of kernels
/// (one full subspace listing per level). Shared by the state-matrix and
/// the diagonal-matrix routes.
pub(crate) fn build_from_kernels(
    spec: &CodeSpec,
    kernels: &[Vec<BitVector>],
) -> Result<Trellis> {
    spec.ensure_valid()?;
    let (n, k) = (spec.n(), spec.k());
    assert_eq!(kernels.len(), n, "one kernel per level");
    if k > EXHAUSTIVE_LIMIT {
        return Err(Error::CapacityExceeded {
            dim: k,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let mut builder = TrellisBuilder::new(n);
    let mut coset_of: Vec<HashMap<BitVector, usize>> = Vec::with_capacity(n);
    for (level, kernel) in kernels.iter().enumerate() {
        let partition = coset_partition(kernel, k)?;
        let mut map = HashMap::new();
        for (idx, coset) in partition.cosets().iter().enumerate() {
            builder.add_vertex(level, coset[0].clone());
            for u in coset {
                map.insert(u.clone(), idx);
            }
        }
        coset_of.push(map);
    }
    for u in gf2::enumerate_space(k)? {
        let word = gf2::multiply(&u, spec.g())?;
        for section in 0..n {
            let tail = coset_of[section][&u];
            let head = coset_of[(section + 1) % n][&u];
            builder.add_edge(section, tail, u8::from(word.get(section)), head);
        }
    }
    builder.finish()
}

/// Coset-quotient trellis over the kernels of the state matrices. Vertex
/// labels are coset representatives in `F^k`.
pub fn build_algebraic(spec: &CodeSpec) -> Result<Trellis> {
    let chain = bcjr::state_matrices(spec)?;
    let mut kernels = Vec::with_capacity(spec.n());
    for i in 0..spec.n() {
        kernels.push(gf2::kernel_set(chain.matrix(i))?);
    }
    build_from_kernels(spec, &kernels)
}

/// Dimension of the edge space of section `i` (one based):
/// `k - dim ker(N_{i-1} | g_i | N_i)`.
pub fn edge_space_dim(spec: &CodeSpec, chain: &StateMatrixChain, i: usize) -> Result<usize> {
    let m = chain.edge_matrix(spec.g(), i)?;
    Ok(spec.k() - gf2::kernel_basis(&m).len())
}

/// The code split along its span kinds: the subcode generated by the
/// conventional-span rows and its cosets by combinations of the
/// circular-span rows.
#[derive(Clone, Debug)]
pub struct SubcodeDecomposition {
    /// Zero-based indices of the conventional-span generator rows.
    pub conventional_rows: Vec<usize>,
    /// Zero-based indices of the circular-span generator rows.
    pub circular_rows: Vec<usize>,
    /// Codewords of every coset, `cosets[0]` being the subcode itself.
    /// Coset `l` is offset by the circular-row combination whose bit `j`
    /// (least significant first) selects `circular_rows[j]`.
    pub cosets: Vec<Vec<BitVector>>,
    /// The offset codeword of every coset (zero for the subcode).
    pub representatives: Vec<BitVector>,
    /// Full-length coefficient vector of every representative.
    pub rep_coefficients: Vec<BitVector>,
}

pub fn subcode_decomposition(spec: &CodeSpec) -> Result<SubcodeDecomposition> {
    spec.ensure_valid()?;
    let k = spec.k();
    if k > EXHAUSTIVE_LIMIT {
        return Err(Error::CapacityExceeded {
            dim: k,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let mut conventional_rows = Vec::new();
    let mut circular_rows = Vec::new();
    for l in 0..k {
        match spec.spans().get(l).kind() {
            SpanKind::Conventional => conventional_rows.push(l),
            SpanKind::Circular => circular_rows.push(l),
        }
    }
    let mut subcode = Vec::new();
    for mask in 0..1usize << conventional_rows.len() {
        let mut word = BitVector::zeros(spec.n());
        for (j, &row) in conventional_rows.iter().enumerate() {
            if mask >> j & 1 == 1 {
                word = word.xor(&spec.g().row(row));
            }
        }
        subcode.push(word);
    }
    subcode.sort();

    let mut cosets = Vec::new();
    let mut representatives = Vec::new();
    let mut rep_coefficients = Vec::new();
    for mask in 0..1usize << circular_rows.len() {
        let mut rep = BitVector::zeros(spec.n());
        let mut coeffs = BitVector::zeros(k);
        for (j, &row) in circular_rows.iter().enumerate() {
            if mask >> j & 1 == 1 {
                rep = rep.xor(&spec.g().row(row));
                coeffs.set(row, true);
            }
        }
        let mut coset: Vec<BitVector> = subcode.iter().map(|w| w.xor(&rep)).collect();
        coset.sort();
        cosets.push(coset);
        representatives.push(rep);
        rep_coefficients.push(coeffs);
    }
    Ok(SubcodeDecomposition {
        conventional_rows,
        circular_rows,
        cosets,
        representatives,
        rep_coefficients,
    })
}

/// Partial-syndrome map of coset `l` at level `i`: the syndrome of the
/// first `i` symbols of `word`, offset by the displacement of the coset
/// representative. Rejects words outside the coset.
pub fn pi_mapping(
    spec: &CodeSpec,
    l: usize,
    i: usize,
    word: &BitVector,
) -> Result<BitVector> {
    let decomposition = subcode_decomposition(spec)?;
    let Some(coset) = decomposition.cosets.get(l) else {
        return Err(Error::CosetMembership {
            word: word.to_string(),
            index: l,
        });
    };
    if coset.binary_search(word).is_err() {
        return Err(Error::CosetMembership {
            word: word.to_string(),
            index: l,
        });
    }
    let mut state = bcjr::displacement_vector(spec, &decomposition.rep_coefficients[l])?;
    for j in 0..i.min(spec.n()) {
        if word.get(j) {
            state = state.xor(&spec.h().column(j));
        }
    }
    Ok(state)
}
