use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};
use tree_core::int_bits;

/// An integer or minus infinity. Minus infinity absorbs addition; finite sums
/// saturate rather than wrap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ext {
    NegInf,
    Fin(i64),
}

pub use Ext::{Fin, NegInf};

impl Ext {
    pub fn finite(self) -> Option<i64> {
        match self {
            Fin(x) => Some(x),
            NegInf => None,
        }
    }

    pub fn bits(self) -> u64 {
        1 + self.finite().map_or(0, int_bits)
    }
}

impl Ord for Ext {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (NegInf, NegInf) => Ordering::Equal,
            (NegInf, Fin(_)) => Ordering::Less,
            (Fin(_), NegInf) => Ordering::Greater,
            (Fin(a), Fin(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Ext {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Ext {
    type Output = Ext;
    fn add(self, rhs: Ext) -> Ext {
        match (self, rhs) {
            (Fin(a), Fin(b)) => Fin(a.saturating_add(b)),
            _ => NegInf,
        }
    }
}

impl Add<i64> for Ext {
    type Output = Ext;
    fn add(self, rhs: i64) -> Ext {
        self + Fin(rhs)
    }
}

impl From<i64> for Ext {
    fn from(x: i64) -> Self {
        Fin(x)
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fin(x) => write!(f, "{x}"),
            NegInf => f.write_str("-inf"),
        }
    }
}
