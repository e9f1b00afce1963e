//! Tree contraction over the AMPC simulator: the bounded-degree algorithm,
//! the generalized algorithm for arbitrary degrees, lifting of unary
//! contracting functions to components and leaf sets, and reconstruction of
//! per-vertex values from the contraction log.

pub mod algebra;
pub mod algebras;
pub mod engine;
pub mod error;
pub mod log;
pub mod reconstruct;
pub mod reference;
pub mod residual;

pub use algebra::{Instance, UnaryAlgebra};
pub use engine::{
    bounded_tree_contract, tree_contract, BoundedPhase, Engine, GeneralPhase, Outcome, Rec,
    RunStats,
};
pub use error::EngineError;
pub use log::{ChildRef, ContractionLog, LogRecord, RecordKind, Removed, LOG_MAGIC, LOG_VERSION};
pub use reconstruct::reconstruct;
pub use reference::{sequential_values, two_contraction_reference, ReferenceRun};
pub use residual::{lift_unary, ChildView, Contracted, Lifted, MemberView, RNode, Res, Residual};
