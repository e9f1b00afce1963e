use ampc_sim::SimFault;
use thiserror::Error;
use tree_core::{TreeError, VertexId};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Sim(#[from] SimFault),
    #[error("invalid instance: {0}")]
    Instance(String),
    #[error(
        "vertex {vertex} has degree {degree} above the bound {limit}; \
         use tree_contract or the bypass transform"
    )]
    DegreeBound {
        vertex: VertexId,
        degree: usize,
        limit: usize,
    },
    #[error("phase cap {cap} exceeded with {live} live vertices")]
    PhaseCap { cap: usize, live: usize },
    #[error("algebra {0} cannot merge sibling leaves")]
    MergeUnsupported(&'static str),
    #[error("log integrity: {0}")]
    LogIntegrity(String),
    #[error("log file: {0}")]
    LogFile(String),
}
