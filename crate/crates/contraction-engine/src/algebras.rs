//! Small algebras used to exercise the engine.

use serde::{Deserialize, Serialize};
use tree_core::int_bits;

use crate::algebra::UnaryAlgebra;

/// A leaf reports its own value, an inner vertex the sum of its children's
/// values. Edges add a constant.
#[derive(Debug, Clone, Copy, Default)]
pub struct SumParent;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumNode {
    pub own: i64,
    pub acc: i64,
    pub absorbed: bool,
}

impl SumNode {
    pub fn leaf(own: i64) -> Self {
        SumNode {
            own,
            acc: 0,
            absorbed: false,
        }
    }
}

impl UnaryAlgebra for SumParent {
    type Node = SumNode;
    type Edge = i64;
    type Value = i64;

    fn resolve(&self, node: &SumNode, children: &[(&i64, &i64)]) -> i64 {
        if !node.absorbed && children.is_empty() {
            return node.own;
        }
        node.acc + children.iter().map(|(k, v)| *k + *v).sum::<i64>()
    }

    fn rake(&self, parent: &mut SumNode, _: usize, edge: &i64, leaf: &i64) {
        parent.acc += edge + leaf;
        parent.absorbed = true;
    }

    fn compress(&self, upper: &i64, mid: &SumNode, lower: &i64) -> Option<i64> {
        Some(upper + mid.acc + lower)
    }

    fn merge_leaves(&self, a: (&SumNode, &i64), b: (&SumNode, &i64)) -> Option<(SumNode, i64)> {
        let va = self.resolve(a.0, &[]) + a.1;
        let vb = self.resolve(b.0, &[]) + b.1;
        Some((SumNode::leaf(va + vb), 0))
    }

    fn node_bits(&self, n: &SumNode) -> u64 {
        int_bits(n.own) + int_bits(n.acc) + 1
    }

    fn edge_bits(&self, e: &i64) -> u64 {
        int_bits(*e)
    }

    // sums are machine integers whatever the tree size
    fn word_bits(&self) -> u64 {
        64
    }

    fn name(&self) -> &'static str {
        "sum-parent"
    }
}

/// Subtree sizes.
#[derive(Debug, Clone, Copy, Default)]
pub struct Count;

impl UnaryAlgebra for Count {
    type Node = i64;
    type Edge = i64;
    type Value = i64;

    fn resolve(&self, node: &i64, children: &[(&i64, &i64)]) -> i64 {
        node + children.iter().map(|(k, v)| *k + *v).sum::<i64>()
    }

    fn rake(&self, parent: &mut i64, _: usize, edge: &i64, leaf: &i64) {
        *parent += edge + leaf;
    }

    fn compress(&self, upper: &i64, mid: &i64, lower: &i64) -> Option<i64> {
        Some(upper + mid + lower)
    }

    fn merge_leaves(&self, a: (&i64, &i64), b: (&i64, &i64)) -> Option<(i64, i64)> {
        Some((a.0 + a.1 + b.0 + b.1, 0))
    }

    fn node_bits(&self, n: &i64) -> u64 {
        int_bits(*n)
    }

    fn edge_bits(&self, e: &i64) -> u64 {
        int_bits(*e)
    }

    fn name(&self) -> &'static str {
        "count"
    }
}

/// Height of each subtree (a leaf has height 0). Edges are max-plus maps
/// `x -> max(x + add, floor)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Height;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxPlus {
    pub add: i64,
    pub floor: Option<i64>,
}

impl MaxPlus {
    pub const STEP: MaxPlus = MaxPlus {
        add: 1,
        floor: None,
    };

    pub fn apply(&self, x: i64) -> i64 {
        self.floor.map_or(x + self.add, |f| f.max(x + self.add))
    }
}

impl UnaryAlgebra for Height {
    type Node = i64;
    type Edge = MaxPlus;
    type Value = i64;

    fn resolve(&self, node: &i64, children: &[(&MaxPlus, &i64)]) -> i64 {
        children
            .iter()
            .map(|(e, v)| e.apply(**v))
            .fold(*node, i64::max)
    }

    fn rake(&self, parent: &mut i64, _: usize, edge: &MaxPlus, leaf: &i64) {
        *parent = (*parent).max(edge.apply(*leaf));
    }

    fn compress(&self, upper: &MaxPlus, mid: &i64, lower: &MaxPlus) -> Option<MaxPlus> {
        let mut floor = upper.apply(*mid);
        if let Some(f) = lower.floor {
            floor = floor.max(upper.apply(f));
        }
        Some(MaxPlus {
            add: upper.add + lower.add,
            floor: Some(floor),
        })
    }

    fn merge_leaves(&self, a: (&i64, &MaxPlus), b: (&i64, &MaxPlus)) -> Option<(i64, MaxPlus)> {
        let top = a.1.apply(*a.0).max(b.1.apply(*b.0));
        Some((
            top,
            MaxPlus {
                add: 0,
                floor: None,
            },
        ))
    }

    fn node_bits(&self, n: &i64) -> u64 {
        int_bits(*n)
    }

    fn edge_bits(&self, e: &MaxPlus) -> u64 {
        int_bits(e.add) + 1 + e.floor.map_or(0, int_bits)
    }

    fn name(&self) -> &'static str {
        "height"
    }
}
