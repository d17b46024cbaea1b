use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("contraction block is empty")]
    EmptyBlock,

    #[error("digraph is not strongly connected")]
    NotStronglyConnected,

    #[error("multigraph is not 2-edge-connected")]
    NotTwoEdgeConnected,

    #[error("digraph is not bidirected: arc {0}->{1} has no reverse")]
    NotBidirected(usize, usize),

    #[error("star {0} is empty or contains its own source")]
    MalformedStar(usize),

    #[error("duplicate edge {{{0},{1}}}")]
    DuplicateEdge(usize, usize),

    #[error("edge cost {0} is not 0 or 1")]
    BadCost(u8),

    #[error("unknown id {0}")]
    UnknownId(usize),

    #[error("star {0} is not live")]
    DeadStar(usize),

    #[error("cut must be a nonempty proper subset of the vertex set")]
    InvalidCut,

    #[error("star set is not quasiperfect")]
    NotQuasiperfect,

    #[error("star set is not perfect")]
    NotPerfect,

    #[error("instance too large for exhaustive search: {size} > limit {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("construction failed validation: {0}")]
    Construction(String),

    #[error("certificate infeasible: {0} violation(s)")]
    InfeasibleCertificate(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
