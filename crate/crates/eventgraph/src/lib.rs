//! Event-graph polytopes, two-state overlaps and Bargmann invariants.
//!
//! The crate covers:
//!
//! - [`graphs`]: event graphs, extreme deterministic labelings, coloring-based restrictions.
//! - [`polytope`]: exact double-description facet enumeration, named inequality families,
//!   cross-sections and the stable-set correspondence.
//! - [`linalg`]: dense complex Hermitian eigensolver, PSD tests, pivoted Cholesky, random states.
//! - [`invariants`]: overlaps, Bargmann invariants, candidate Gram matrices, frame graphs.
//! - [`optimize`]: seesaw maximization, Frank-Wolfe bounds for `h_n`, boundary tracing.
//! - [`witnesses`]: interrogation efficiencies, robust cycle bounds, correlator forms.
//! - [`cli`]: the `eventgraph` command-line front end.

pub mod cli;
pub mod graphs;
pub mod invariants;
pub mod linalg;
pub mod optimize;
pub mod polytope;
pub mod witnesses;

/// Errors shared by all modules.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("size limit exceeded: {0}")]
    Size(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid inequality: vertex {vertex} gives {value} > {bound}")]
    Violated { vertex: usize, value: String, bound: String },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("out of scope: {0}")]
    Scope(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
