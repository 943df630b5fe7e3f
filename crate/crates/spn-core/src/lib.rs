//! Sum-product networks over binary variables.
//!
//! A network is a rooted DAG whose leaves are per-variable indicators and
//! whose internal nodes are weighted sums and products. This crate covers
//! the circuit layer only: building graphs, checking the completeness and
//! decomposability conditions, evaluating with partial evidence, running
//! max-product (MPE) inference with per-edge traversal counts, and reading
//! and writing the versioned JSON file format shared by the CLI tools.
//!
//! Evaluation runs in log space by default: sums use log-sum-exp, products
//! add log values, and zero-probability branches contribute negative
//! infinity. The linear-space pass is kept for cross-checking; at realistic
//! variable counts a linear product underflows.
//!
//! A built [`SpnGraph`] is immutable for readers and safe to share across
//! threads. Weight updates and structural edits (child removal, dropping
//! unreachable nodes) are explicit single-writer operations.

pub mod error;
pub mod evidence;
pub mod graph;
pub mod io;
pub mod mpn;
pub mod random;
pub mod scope;

mod eval;

pub use error::{BuildError, FormatError, SpnError};
pub use evidence::{Evidence, VarState};
pub use graph::{
    EdgeId, Node, NodeId, Polarity, SpnBuilder, SpnGraph, ValidationReport, Violation,
};
pub use mpn::{Mpn, MpeResult};

/// Numerically stable log(exp(a) + exp(b)).
pub(crate) fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    if a > b {
        a + (b - a).exp().ln_1p()
    } else {
        b + (a - b).exp().ln_1p()
    }
}
