//! Tail-biting trellis constructions for binary linear block codes.
//!
//! A tail-biting trellis is a leveled, edge-labeled digraph whose cycles of
//! length `n` spell the words of a length-`n` code. This crate builds such
//! trellises for a linear code from a generator matrix, a parity-check
//! matrix and a list of cyclic coordinate spans, in four ways that are
//! provably related:
//!
//! * [`bcjr::build_tbbcjr`] labels states with partial syndromes,
//! * [`algebraic::build_algebraic`] quotients the message space by the
//!   kernels of the state matrices,
//! * [`kv::product_trellis`] multiplies one two-state elementary trellis
//!   per generator row,
//! * [`emsgm::build_emsgm`] reads vertices and edges off span activity
//!   sets.
//!
//! [`bcjr::build_dual`] produces the dual-code trellis on the same state
//! spaces, and [`metrics`] predicts per-level vertex counts, edge counts
//! and degrees from kernel dimensions alone so the built graphs can be
//! cross-checked against the closed-form complexity calculus.

pub mod algebraic;
pub mod bcjr;
pub mod code;
pub mod emsgm;
pub mod error;
pub mod gf2;
pub mod kv;
pub mod metrics;
pub mod sample;
pub mod trellis;
pub mod verify;

pub use error::{Error, Result};
