//! Independent sets and matchings on trees: greedy maximal independent set
//! through bypass scaffolds and bounded-degree contraction, the greedy
//! maximal matching it induces, and maximum weight independent set.

pub mod bypass;
pub mod mis;
pub mod misb;
pub mod mwis;

pub use bypass::{bypass_expand, Expanded};
pub use mis::{maximal_matching_solve, mis_solve, MatchingSolution, MisSolution};
pub use misb::{misb_combine, Misb, MisbEdgePair, MisbVertexData};
pub use mwis::{mwis_solve, Mwis, MwisEdgeTuple, MwisSolution, MwisVertexData};
