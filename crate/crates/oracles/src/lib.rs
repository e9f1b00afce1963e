//! Reference solvers and instance generators. Nothing here depends on the
//! contraction engine; every solver is either exhaustive or a plain
//! sequential recursion.

pub mod expr;
pub mod gen;
pub mod indset;
pub mod iso;
pub mod matching;

pub use expr::{eval_reference, random_expression, EvalError};
pub use indset::{
    brute_maximal_independent_sets, brute_mwis, greedy_maximal_matching, greedy_mis, greedy_misb,
    is_independent, is_maximal_independent, mwis_table,
};
pub use iso::{ahu_code, canonical_iso};
pub use matching::{
    brute_mwm, is_matching, is_maximal_matching, matching_weight, mwm_table, mwm_value, MwmRow,
};

use std::hash::Hasher;

/// One comparison between a reference answer and an engine answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub problem: String,
    pub digest: String,
    pub oracle: String,
    pub engine: String,
    pub equal: bool,
}

impl OracleReport {
    pub fn new(problem: &str, digest: String, oracle: String, engine: String) -> Self {
        let equal = oracle == engine;
        OracleReport {
            problem: problem.to_string(),
            digest,
            oracle,
            engine,
            equal,
        }
    }
}

/// Stable FNV-1a digest of an instance's text form.
pub fn digest(text: &str) -> String {
    let mut h = Fnv(0xcbf29ce484222325);
    h.write(text.as_bytes());
    format!("{:016x}", h.0)
}

struct Fnv(u64);

impl Hasher for Fnv {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x100000001b3);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable() {
        assert_eq!(digest("3 0\n"), digest("3 0\n"));
        assert_ne!(digest("3 0\n"), digest("3 1\n"));
        assert_eq!(digest(""), "cbf29ce484222325");
        assert_eq!(digest("a"), "af63dc4c8601ec8c");
    }
}
