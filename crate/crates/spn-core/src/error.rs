use thiserror::Error;

/// Structural defects caught while assembling a graph. These are hard
/// errors: a graph with an empty sum or a dangling child index cannot be
/// represented at all. Semantic violations (incompleteness, overlap,
/// cycles) are data instead, reported by `SpnGraph::validate`.
#[derive(Debug, Error)]
pub enum BuildError {
    #[error("graph must have at least one variable")]
    NoVariables,
    #[error("node {node} references child {child}, but only {count} nodes exist")]
    ChildOutOfRange { node: usize, child: usize, count: usize },
    #[error("root id {root} out of range ({count} nodes)")]
    RootOutOfRange { root: usize, count: usize },
    #[error("sum node {0} has no children")]
    EmptySum(usize),
    #[error("product node {0} has no children")]
    EmptyProduct(usize),
    #[error("sum node {node} has {children} children but {weights} weights")]
    WeightArity { node: usize, children: usize, weights: usize },
    #[error("sum node {node}, child {index}: weight {weight} is not a finite nonnegative value")]
    InvalidWeight { node: usize, index: usize, weight: f64 },
    #[error("leaf node {node}: variable {variable} out of range for {num_variables} variables")]
    VariableOutOfRange { node: usize, variable: usize, num_variables: usize },
    #[error("cannot remove the last child of sum node {0}")]
    LastSumChild(usize),
    #[error("node {node} is not a sum node")]
    NotASum { node: usize },
}

/// Runtime evaluation errors.
#[derive(Debug, Error)]
pub enum SpnError {
    #[error("evidence covers {got} variables, graph expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("graph contains a cycle; bottom-up evaluation is undefined")]
    CyclicGraph,
}

/// Errors reading or writing the SPN file format.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed SPN document: {0}")]
    Malformed(String),
    #[error("unsupported SPN format version {found} (this build reads version {expected})")]
    Version { found: u32, expected: u32 },
    #[error("duplicate node id {0}")]
    DuplicateId(usize),
    #[error("node ids must be dense in [0, {count})")]
    NonDenseIds { count: usize },
    #[error("node {id}: {reason}")]
    BadNode { id: usize, reason: String },
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
