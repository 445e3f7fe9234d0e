//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by construction, parsing and verification routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A vector/matrix product was requested with incompatible shapes.
    #[error("dimension mismatch: vector has length {vector_len}, matrix has {matrix_rows} rows")]
    DimensionMismatch {
        vector_len: usize,
        matrix_rows: usize,
    },

    /// An exhaustive enumeration would exceed the configured limit.
    #[error("dimension {dim} exceeds the exhaustive enumeration limit of {limit}")]
    CapacityExceeded { dim: usize, limit: usize },

    /// A textual input could not be parsed.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A row selection from a characteristic matrix is not a basis.
    #[error("rank deficient selection: {0}")]
    RankDeficient(String),

    /// A claimed subspace is not closed under addition.
    #[error("not a subspace: {a} + {b} = {sum} is missing from the input set")]
    NotSubspace { a: String, b: String, sum: String },

    /// A code specification failed validation.
    #[error("invalid code specification: {0}")]
    InvalidSpec(String),

    /// A span list does not have pairwise distinct starts and ends.
    #[error("span list is not an e-MSGM selection: {0}")]
    NotEmsgm(String),

    /// A word was passed to a coset operation it does not belong to.
    #[error("word {word} does not belong to coset {index}")]
    CosetMembership { word: String, index: usize },

    /// A generator row is zero or sticks out of its declared span.
    #[error("row {row}: {message}")]
    BadGeneratorRow { row: usize, message: String },

    /// The isomorphism search gave up after the configured node budget.
    #[error("isomorphism search exceeded its budget of {budget} nodes")]
    SearchBudget { budget: u64 },

    /// A deserialized trellis violates a structural invariant.
    #[error("invalid trellis: {0}")]
    InvalidTrellis(String),

    /// Random specification sampling did not converge.
    #[error("sampling failed: {0}")]
    Sampling(String),

    /// Underlying JSON error.
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
