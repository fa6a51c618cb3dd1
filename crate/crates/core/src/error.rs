use thiserror::Error;

pub type Result<T, E = DbnError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DbnError {
    #[error("node count {0} is outside 1..={max}", max = crate::vbn::MAX_NODES)]
    NodeCount(usize),
    #[error("state has {got} components, expected {expected}")]
    StateWidth { expected: usize, got: usize },
    #[error("state component {0} is not a bit")]
    NotABit(u8),
    #[error("state index {index} is outside 1..={max}")]
    StateIndex { index: usize, max: usize },
    #[error("rule number {number} is outside 1..={max}")]
    RuleNumber { number: u64, max: u64 },
    #[error("rule vector has {got} components, expected {expected}")]
    RuleVectorWidth { expected: usize, got: usize },
    #[error("matrix row {row} has {ones} entries equal to 1")]
    NotBoolean { row: usize, ones: usize },
    #[error("matrix is not square with 2^μ rows: {0}")]
    MatrixShape(String),
    #[error("label {label} is outside 1..={max}")]
    LabelRange { label: u32, max: u32 },
    #[error("labeling covers {got} states, expected {expected}")]
    LabelingWidth { expected: usize, got: usize },
    #[error("label sequence needs at least 2 terms, got {0}")]
    ShortSequence(usize),
    #[error("sequence lengths differ: {states} states vs {labels} labels")]
    LengthMismatch { states: usize, labels: usize },
    #[error("local table for node {node} has {got} entries, expected {expected}")]
    LocalTable { node: usize, expected: usize, got: usize },
    #[error("incoming node {node} is not a node of a {nodes}-node network")]
    IncomingNode { node: usize, nodes: usize },
    #[error("vertex {0} has no out-going edge")]
    DeadVertex(String),
    #[error("digraph has {vertices} vertices, more than the {states} states available")]
    TooManyVertices { vertices: usize, states: usize },
    #[error("pipeline inconsistency: {0}")]
    Pipeline(String),
    #[error("enumeration is limited to networks with at most 2 nodes")]
    EnumerationTooLarge,
    #[error("{0}")]
    Unsupported(String),
    #[error("theta({n}, {m}) requires 1 <= m <= n")]
    ThetaDomain { n: u64, m: u64 },
    #[error("no trial satisfies the selection")]
    EmptySelection,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("scripted decisions: {0}")]
    Script(String),
}
