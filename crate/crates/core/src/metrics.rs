//! Closed-form complexity figures and duality cross-checks.
//!
//! All counts of a state-chain trellis are powers of two whose exponents
//! are kernel dimensions: level `i` has `2^(k - dim ker N_i)` vertices,
//! position `i` has `2^(k - dim ker (N_{i-1} | g_i | N_i))` edges, and
//! degrees are the matching quotients. [`compare`] evaluates these
//! predictions against a concretely built trellis. The remaining checks
//! relate a trellis to its dual: equal vertex counts level by level, the
//! activity-set identity `alpha_i + alpha^_i = beta_{i-1} + beta_i + 1`,
//! and the edge-space dimension identities connecting both chains.

use std::fmt::Write as _;

use crate::bcjr::{self, StateMatrixChain};
use crate::code::{CodeSpec, SpanList};
use crate::emsgm::{self, ActivityTable};
use crate::error::{Error, Result};
use crate::gf2::{self, BitMatrix};
use crate::trellis::Trellis;

fn state_kernel_dim(chain: &StateMatrixChain, i: usize) -> usize {
    gf2::kernel_basis(chain.matrix(i)).len()
}

fn edge_kernel_dim(chain: &StateMatrixChain, gen: &BitMatrix, i: usize) -> Result<usize> {
    Ok(gf2::kernel_basis(&chain.edge_matrix(gen, i)?).len())
}

/// Predicted vertex count per level: `2^(k - dim ker N_i)`.
pub fn predict_vertex_counts(chain: &StateMatrixChain) -> Vec<usize> {
    (0..chain.n())
        .map(|i| 1usize << (chain.k() - state_kernel_dim(chain, i)))
        .collect()
}

/// Predicted edge count per section: section `j` (position `j + 1`) holds
/// `2^(k - dim ker (N_j | g_{j+1} | N_{j+1}))` edges.
pub fn predict_edge_counts(spec: &CodeSpec, chain: &StateMatrixChain) -> Result<Vec<usize>> {
    (1..=spec.n())
        .map(|i| Ok(1usize << (spec.k() - edge_kernel_dim(chain, spec.g(), i)?)))
        .collect()
}

/// Predicted uniform degrees, per level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreePrediction {
    pub out_degrees: Vec<usize>,
    pub in_degrees: Vec<usize>,
}

/// Degrees as kernel-dimension quotients: a level-`i` vertex emits
/// `2^(dim ker N_i - dim ker edge matrix of position i+1)` edges and
/// absorbs `2^(dim ker N_i - dim ker edge matrix of position i)`, the
/// level-0 in-degree reading position `n`.
pub fn predict_degrees(spec: &CodeSpec, chain: &StateMatrixChain) -> Result<DegreePrediction> {
    let n = spec.n();
    let mut out_degrees = Vec::with_capacity(n);
    let mut in_degrees = Vec::with_capacity(n);
    for i in 0..n {
        let v = state_kernel_dim(chain, i);
        let in_pos = if i == 0 { n } else { i };
        out_degrees.push(1usize << (v - edge_kernel_dim(chain, spec.g(), i + 1)?));
        in_degrees.push(1usize << (v - edge_kernel_dim(chain, spec.g(), in_pos)?));
    }
    Ok(DegreePrediction {
        out_degrees,
        in_degrees,
    })
}

/// Predicted and counted figures of one level.
#[derive(Clone, Debug)]
pub struct LevelMetrics {
    pub level: usize,
    pub predicted_vertices: usize,
    pub counted_vertices: usize,
    /// Edges of the section leaving this level.
    pub predicted_section_edges: usize,
    pub counted_section_edges: usize,
    pub predicted_out_degree: usize,
    pub out_degree_range: (usize, usize),
    pub predicted_in_degree: usize,
    pub in_degree_range: (usize, usize),
}

impl LevelMetrics {
    /// True when counts match and degrees are uniform at the predicted
    /// value.
    pub fn holds(&self) -> bool {
        self.predicted_vertices == self.counted_vertices
            && self.predicted_section_edges == self.counted_section_edges
            && self.out_degree_range == (self.predicted_out_degree, self.predicted_out_degree)
            && self.in_degree_range == (self.predicted_in_degree, self.predicted_in_degree)
    }
}

/// Per-level comparison of the closed-form figures with a built trellis.
#[derive(Clone, Debug)]
pub struct MetricsReport {
    pub levels: Vec<LevelMetrics>,
}

impl MetricsReport {
    pub fn holds(&self) -> bool {
        self.levels.iter().all(LevelMetrics::holds)
    }

    /// Plain-text table, one line per level, `predicted/counted` pairs.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "level  vertices  edges  out-degree  in-degree");
        for m in &self.levels {
            let _ = writeln!(
                s,
                "{:>5}  {:>8}  {:>5}  {:>10}  {:>9}",
                m.level,
                format!("{}/{}", m.predicted_vertices, m.counted_vertices),
                format!("{}/{}", m.predicted_section_edges, m.counted_section_edges),
                format!("{}/{}", m.predicted_out_degree, range_text(m.out_degree_range)),
                format!("{}/{}", m.predicted_in_degree, range_text(m.in_degree_range)),
            );
        }
        let _ = writeln!(
            s,
            "{}",
            if self.holds() {
                "all levels match the predictions"
            } else {
                "MISMATCH against the predictions"
            }
        );
        s
    }
}

fn range_text(range: (usize, usize)) -> String {
    if range.0 == range.1 {
        range.0.to_string()
    } else {
        format!("{}..{}", range.0, range.1)
    }
}

/// Evaluates the predictions of a specification against a built trellis
/// of the same depth.
pub fn compare(spec: &CodeSpec, trellis: &Trellis) -> Result<MetricsReport> {
    spec.ensure_valid()?;
    if trellis.depth() != spec.n() {
        return Err(Error::InvalidTrellis(format!(
            "trellis depth {} does not match word length {}",
            trellis.depth(),
            spec.n()
        )));
    }
    let chain = bcjr::state_matrices(spec)?;
    let vertices = predict_vertex_counts(&chain);
    let edges = predict_edge_counts(spec, &chain)?;
    let degrees = predict_degrees(spec, &chain)?;
    let profile = trellis.profile();
    let levels = (0..spec.n())
        .map(|i| LevelMetrics {
            level: i,
            predicted_vertices: vertices[i],
            counted_vertices: profile.vertex_counts[i],
            predicted_section_edges: edges[i],
            counted_section_edges: profile.edge_counts[i],
            predicted_out_degree: degrees.out_degrees[i],
            out_degree_range: profile.out_degree_range(i),
            predicted_in_degree: degrees.in_degrees[i],
            in_degree_range: profile.in_degree_range(i),
        })
        .collect();
    Ok(MetricsReport { levels })
}

/// Primal and dual vertex counts of one level.
#[derive(Clone, Debug)]
pub struct DualVertexLevel {
    pub level: usize,
    pub primal: usize,
    pub dual: usize,
}

/// Level-by-level comparison of primal and dual vertex counts.
#[derive(Clone, Debug)]
pub struct DualVertexReport {
    pub levels: Vec<DualVertexLevel>,
}

impl DualVertexReport {
    pub fn holds(&self) -> bool {
        self.levels.iter().all(|l| l.primal == l.dual)
    }
}

/// Predicts `|V_i| = |V^_i|` from both chains: the transposed state
/// matrices have the same ranks, so the counts agree level by level.
pub fn check_dual_vertex_equality(spec: &CodeSpec) -> Result<DualVertexReport> {
    spec.ensure_valid()?;
    let chain = bcjr::state_matrices(spec)?;
    let dual = chain.transposed();
    let (k, r) = (spec.k(), spec.n() - spec.k());
    let levels = (0..spec.n())
        .map(|i| DualVertexLevel {
            level: i,
            primal: 1usize << (k - state_kernel_dim(&chain, i)),
            dual: 1usize << (r - state_kernel_dim(&dual, i)),
        })
        .collect();
    Ok(DualVertexReport { levels })
}

/// Both directions of the activity-set identity at one position.
#[derive(Clone, Debug)]
pub struct AlphaBetaPosition {
    pub position: usize,
    pub alpha: usize,
    pub alpha_dual: usize,
    /// `alpha_i = -alpha^_i + beta^_{i-1} + beta^_i + 1`.
    pub from_dual: bool,
    /// `alpha^_i = -alpha_i + beta_{i-1} + beta_i + 1`.
    pub from_primal: bool,
}

/// Outcome of [`check_alpha_beta_duality`].
#[derive(Clone, Debug)]
pub struct AlphaBetaReport {
    pub positions: Vec<AlphaBetaPosition>,
}

impl AlphaBetaReport {
    pub fn holds(&self) -> bool {
        self.positions.iter().all(|p| p.from_dual && p.from_primal)
    }
}

/// Checks `alpha_i + alpha^_i = beta_{i-1} + beta_i + 1` against both
/// tables, position by position.
pub fn check_alpha_beta_duality(
    primal: &ActivityTable,
    dual: &ActivityTable,
) -> Result<AlphaBetaReport> {
    if primal.n() != dual.n() {
        return Err(Error::InvalidSpec(format!(
            "activity tables have different lengths: {} vs {}",
            primal.n(),
            dual.n()
        )));
    }
    let positions = (1..=primal.n())
        .map(|i| {
            let sum = (primal.alpha(i) + dual.alpha(i)) as isize;
            AlphaBetaPosition {
                position: i,
                alpha: primal.alpha(i),
                alpha_dual: dual.alpha(i),
                from_dual: sum == (dual.beta(i - 1) + dual.beta(i) + 1) as isize,
                from_primal: sum == (primal.beta(i - 1) + primal.beta(i) + 1) as isize,
            }
        })
        .collect();
    Ok(AlphaBetaReport { positions })
}

/// Edge-space dimensions of both chains at one position, with the two
/// identities tying them together and the activity-set bridge.
#[derive(Clone, Debug)]
pub struct EdgeDualityPosition {
    pub position: usize,
    /// `k - dim ker (N_{i-1} | g_i | N_i)`.
    pub primal_edge_dim: usize,
    /// `(n - k) - dim ker (N^_{i-1} | h_i | N^_i)`.
    pub dual_edge_dim: usize,
    /// Primal edge dimension expressed through dual kernel dimensions.
    pub first_identity: bool,
    /// Dual edge dimension expressed through primal kernel dimensions.
    pub second_identity: bool,
    /// `alpha^_i` of the dual span list equals the dual edge dimension.
    pub alpha_bridge: bool,
}

/// Outcome of [`check_edge_dimension_duality`].
#[derive(Clone, Debug)]
pub struct EdgeDualityReport {
    pub positions: Vec<EdgeDualityPosition>,
    /// Per level: `beta^_i` of the dual span list equals
    /// `(n - k) - dim ker N^_i`.
    pub beta_bridges: Vec<bool>,
}

impl EdgeDualityReport {
    pub fn holds(&self) -> bool {
        self.positions
            .iter()
            .all(|p| p.first_identity && p.second_identity && p.alpha_bridge)
            && self.beta_bridges.iter().all(|&b| b)
    }
}

/// Cross-checks the edge-space dimensions of a chain and its transpose.
///
/// `dual_g` and `dual_spans` must form a valid span selection for the
/// dual code (its parity-check being the primal generator); the
/// activity table of `dual_spans` supplies the `alpha^`/`beta^` bridges.
/// The dual edge matrices use the columns of the primal parity-check,
/// which indexes the rows of the transposed chain.
pub fn check_edge_dimension_duality(
    spec: &CodeSpec,
    dual_g: &BitMatrix,
    dual_spans: &SpanList,
) -> Result<EdgeDualityReport> {
    spec.ensure_valid()?;
    let dual_spec = CodeSpec::new(dual_g.clone(), spec.g().clone(), dual_spans.clone())?;
    dual_spec.ensure_valid()?;
    let emsgm_report = emsgm::is_emsgm(dual_spans);
    if !emsgm_report.holds() {
        return Err(Error::NotEmsgm(emsgm_report.describe()));
    }

    let chain = bcjr::state_matrices(spec)?;
    let dual_chain = chain.transposed();
    let table = emsgm::activity_table(dual_spans);
    let (n, k) = (spec.n(), spec.k());
    let r = n - k;

    let mut positions = Vec::with_capacity(n);
    for i in 1..=n {
        let e = edge_kernel_dim(&chain, spec.g(), i)?;
        let de = edge_kernel_dim(&dual_chain, spec.h(), i)?;
        let nv_prev = state_kernel_dim(&chain, i - 1) as isize;
        let nv = state_kernel_dim(&chain, i) as isize;
        let dv_prev = state_kernel_dim(&dual_chain, i - 1) as isize;
        let dv = state_kernel_dim(&dual_chain, i) as isize;
        positions.push(EdgeDualityPosition {
            position: i,
            primal_edge_dim: k - e,
            dual_edge_dim: r - de,
            first_identity: (k - e) as isize == (r + 1) as isize + de as isize - dv_prev - dv,
            second_identity: (r - de) as isize == (k + 1) as isize + e as isize - nv_prev - nv,
            alpha_bridge: table.alpha(i) == r - de,
        });
    }
    let beta_bridges = (0..n)
        .map(|i| table.beta(i) == r - state_kernel_dim(&dual_chain, i))
        .collect();
    Ok(EdgeDualityReport {
        positions,
        beta_bridges,
    })
}
