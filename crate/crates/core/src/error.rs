use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vertex count mismatch: {left} vs {right}")]
    VertexCountMismatch { left: usize, right: usize },

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("vertex set is not connected")]
    Disconnected,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid producer move: {0}")]
    InvalidMove(String),

    #[error("edge ({0}, {1}) has no colour")]
    Uncolored(usize, usize),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("graph too small: {0}")]
    TooSmall(String),

    #[error("graph too large for exact enumeration: n = {n}, limit {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("boost context infeasible: {0}")]
    ContextInfeasible(String),

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
