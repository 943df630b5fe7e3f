use thiserror::Error;

use spn_core::{BuildError, SpnError};

#[derive(Debug, Error)]
pub enum StructureError {
    #[error("structure generation needs at least 2 variables, got {0}")]
    TooFewVariables(usize),
    #[error("node budget exceeded: reached {nodes} nodes with budget {budget}")]
    NodeBudget { nodes: usize, budget: usize },
    #[error("k must be at least 1")]
    InvalidK,
    #[error("num_decompositions_per_region must be at least 1")]
    InvalidDecompositions,
    #[error("empty example list")]
    EmptyExamples,
    #[error("empty dataset")]
    EmptyDataset,
    #[error("fraction must be in (0, 1], got {0}")]
    InvalidFraction(f64),
    #[error(transparent)]
    Spn(#[from] SpnError),
    #[error(transparent)]
    Build(#[from] BuildError),
}
