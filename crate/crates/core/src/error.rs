use thiserror::Error;

/// Everything that can go wrong while building or analysing embeddings.
#[derive(Debug, Error)]
pub enum Error {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("invalid rotation: {0}")]
    InvalidRotation(String),
    #[error("chain is not a cycle: vertex `{0}` has odd degree")]
    NotACycle(String),
    #[error("chain does not induce a circle: {0}")]
    NotACircle(String),
    #[error("chain has length {found}, expected {expected}")]
    ChainLength { expected: usize, found: usize },
    #[error("not a spanning tree: {0}")]
    NotASpanningTree(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid voltage assignment: {0}")]
    InvalidVoltage(String),
    #[error("invalid walk: {0}")]
    InvalidWalk(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("enumeration needs {count} items, above the limit of {limit}")]
    Guardrail { count: u128, limit: u128 },
    #[error("inconsistent result: {0}")]
    Inconsistent(String),
    #[error("no witness found: {0}")]
    NoWitness(String),
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
