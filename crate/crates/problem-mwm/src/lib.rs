//! Maximum weight matching on trees through tree contraction.
//!
//! Every vertex keeps two running constants and every edge a four-tuple of
//! best path matchings under the four end conditions, which makes leaf
//! trimming and chain splicing closed operations.

pub mod algebra;
pub mod dp;
pub mod ext;
pub mod extract;
pub mod solve;

pub use algebra::{
    mwm_connected_contract, mwm_sibling_contract, Mwm, MwmComponentResidual, MWM_C_W,
};
pub use dp::{
    contract_chain, cut_off, dp_combine, trim_leaves, MwmEdgeTuple, MwmValue, MwmVertexData,
};
pub use ext::Ext;
pub use extract::{extract_matching, match_pointers, Extraction, PointerCycle};
pub use solve::{mwm_solve, MwmSolution};
