use contraction_engine::EngineError;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// An arithmetic fault and the byte offset of the operator that raised it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Error)]
pub enum ExprFault {
    #[error("division by zero at {0}")]
    DivisionByZero(usize),
    #[error("exponent at {0} is not an integer in 0..=64")]
    BadExponent(usize),
}

#[derive(Debug, Error)]
pub enum ExprError {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error(transparent)]
    Arithmetic(#[from] ExprFault),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

impl ExprError {
    pub fn parse(pos: usize, msg: impl Into<String>) -> Self {
        ExprError::Parse {
            pos,
            msg: msg.into(),
        }
    }
}
