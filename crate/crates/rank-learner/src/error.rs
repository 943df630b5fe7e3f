use thiserror::Error;

use spn_core::{BuildError, SpnError};

#[derive(Debug, Error)]
pub enum RankError {
    #[error(transparent)]
    Spn(#[from] SpnError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("empty dataset")]
    EmptyDataset,
    #[error("no qualifying pairs (C1={c1}, C2={c2})")]
    NoQualifyingPairs { c1: u64, c2: u64 },
    #[error("C1 must be a positive threshold")]
    InvalidC1,
    #[error("item {id}: {got} bits, network expects {expected}")]
    Dimension { id: String, got: usize, expected: usize },
    #[error("non-finite weight update on edge e{edge} (sum node n{node}, child {child})")]
    NonFiniteUpdate { edge: usize, node: usize, child: usize },
}

/// File-level errors for the dataset and pair CSV formats. Line numbers are
/// 1-based and include the header.
#[derive(Debug, Error)]
pub enum DataError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("line {line}: {msg}")]
    Parse { line: u64, msg: String },
    #[error("line {line}: bit string length {got} differs from first row ({expected})")]
    RaggedBits { line: u64, got: usize, expected: usize },
    #[error("unknown item id {id:?} referenced on line {line}")]
    UnknownId { id: String, line: u64 },
    #[error("duplicate item id {0:?}")]
    DuplicateId(String),
}
