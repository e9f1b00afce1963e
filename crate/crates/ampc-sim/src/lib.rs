//! Round-accurate simulator of adaptive massively parallel computation:
//! machines with `S` words of local space read adaptively from the previous
//! hash-table generation and write the next one, under per-round budgets.

pub mod config;
pub mod sim;

pub use config::{ConfigError, SimConfig};
pub use sim::{
    Key, Machine, MachineStats, Metrics, PhaseReport, Program, RoundLedger, RoundRecord, SimFault,
    Simulator, Words,
};
