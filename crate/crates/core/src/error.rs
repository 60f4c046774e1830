//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter fell outside its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An exact enumeration would exceed the desk-scale capacity budget.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// No clique-indicator size satisfies the feasibility gate up to the cap.
    /// `best_ratio` is the largest q / (5 * p_ind) seen while scanning.
    #[error("no feasible indicator size up to cap {cap} (best q/(5*p_ind) ratio {best_ratio:.3e})")]
    InfeasibleCliqueSize { cap: usize, best_ratio: f64 },

    /// Text-format parse failure, with the 1-based offending line.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A Monte-Carlo robustness verdict straddled its threshold where a
    /// definite answer was required.
    #[error("monte-carlo verdict inconclusive: {0}")]
    Inconclusive(String),

    /// Circuit evaluated against a graph on a different vertex count.
    #[error("vertex count mismatch: circuit is on n={expected}, graph has n={actual}")]
    VertexCountMismatch { expected: usize, actual: usize },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
