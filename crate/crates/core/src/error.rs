use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("block {block}: size must be at least 2, got {size}")]
    BlockTooSmall { block: usize, size: usize },

    #[error("block 0 must not carry attach_block/attach_vertex")]
    FirstBlockAttached,

    #[error("block {block}: attach_block and attach_vertex are both required after the first block")]
    MissingAttachment { block: usize },

    #[error("block {block}: attach_block {attach_block} does not name a previously placed block")]
    DanglingBlock { block: usize, attach_block: usize },

    #[error("block {block}: attach_vertex {attach_vertex} does not exist in the graph built so far")]
    DanglingVertex { block: usize, attach_vertex: usize },

    #[error("block {block}: attach_vertex {attach_vertex} is not a vertex of block {attach_block}")]
    VertexNotInBlock {
        block: usize,
        attach_block: usize,
        attach_vertex: usize,
    },

    #[error("at least one block is required")]
    NoBlocks,

    #[error("invalid clique tree structure: {0}")]
    InvalidStructure(String),

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has a negative entry at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize },

    #[error("matrix is zero")]
    ZeroMatrix,

    #[error("{method} did not converge within {iterations} iterations")]
    NoConvergence { method: &'static str, iterations: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("search space guard exceeded: {count} candidates > {limit}")]
    GuardExceeded { count: u128, limit: u128 },

    #[error("partition does not match graph: {0}")]
    PartitionMismatch(String),

    #[error("failed to parse graph file: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
