use thiserror::Error;

use crate::grid::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("operation requires a spanning grid subgraph")]
    NotSpanning,

    #[error("vertex ({0}, {1}) is not in the graph")]
    VertexNotFound(u16, u16),

    #[error("not a valid permutation of [{expected}]: {got:?}")]
    BadPermutation { expected: u16, got: Vec<u16> },

    #[error("size {size} exceeds cap {cap} ({what}); raise via GRIDRAM_CAPS or use an explicit search")]
    SizeCap {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("invalid parameter: {0}")]
    BadParameter(String),

    #[error("edge {{({0}, {1}), ({2}, {3})}} is not within a row or column")]
    DiagonalEdge(u16, u16, u16, u16),

    #[error("cycle is not simple: {line_kind} {index} has a disconnected intersection")]
    NotSimple { line_kind: &'static str, index: u16 },

    #[error("invalid grid subgraph: {0}")]
    Invalid(ValidationReport),

    #[error("hyperedge {0:?} does not have a 2-1 split across the bipartition")]
    BadSplit([u32; 3]),

    #[error("no Property-B bipartition with 2-1 edge splits exists")]
    NoPropertyB,

    #[error("missing Ramsey values: {0:?}")]
    MissingRamsey(Vec<u16>),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
