use contraction_engine::EngineError;
use expr_iso::ExprError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("simulation fault: {0}")]
    Sim(String),
    #[error("verification mismatch: {0}")]
    Mismatch(String),
}

impl CliError {
    /// 0 success, 1 mismatch, 2 simulation fault, 3 input error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Sim(_) => 2,
            CliError::Input(_) => 3,
        }
    }

    pub fn input(msg: impl std::fmt::Display) -> Self {
        CliError::Input(msg.to_string())
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Tree(_)
            | EngineError::Instance(_)
            | EngineError::DegreeBound { .. }
            | EngineError::LogFile(_) => CliError::Input(e.to_string()),
            _ => CliError::Sim(e.to_string()),
        }
    }
}

impl From<ExprError> for CliError {
    fn from(e: ExprError) -> Self {
        match e {
            ExprError::Engine(e) => e.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
