use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("tree has no vertices")]
    Empty,
    #[error("vertex id {0} out of range")]
    OutOfRange(usize),
    #[error("multiple roots: {0} and {1}")]
    MultipleRoots(usize, usize),
    #[error("no root")]
    NoRoot,
    #[error("cycle through vertex {0}")]
    Cycle(usize),
    #[error("parent and children maps disagree at vertex {0}")]
    Inconsistent(usize),
    #[error("vertex {vertex} has degree {degree}, above {limit}")]
    DegreeAbove {
        vertex: usize,
        degree: usize,
        limit: usize,
    },
    #[error("payload of vertex {vertex} has {bits} bits, budget is {budget}")]
    PayloadBudget {
        vertex: usize,
        bits: u64,
        budget: u64,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
