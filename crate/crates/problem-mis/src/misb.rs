use contraction_engine::{Instance, UnaryAlgebra};
use serde::{Deserialize, Serialize};

use crate::bypass::Expanded;

/// `bypass` is `B(v)`; `a` is the product over absorbed children of
/// `1 - c_{v,u}`, so it stays 1 while no absorbed child is in the set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MisbVertexData {
    pub bypass: bool,
    pub a: bool,
}

impl MisbVertexData {
    pub fn new(bypass: bool) -> Self {
        MisbVertexData { bypass, a: true }
    }
}

/// Bit map applied to a child's bit: `w1` when the child is in, `w2` when not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MisbEdgePair {
    pub w1: bool,
    pub w2: bool,
}

impl MisbEdgePair {
    pub const FRESH: MisbEdgePair = MisbEdgePair {
        w1: true,
        w2: false,
    };

    pub fn apply(&self, c: bool) -> bool {
        if c {
            self.w1
        } else {
            self.w2
        }
    }
}

/// A standard vertex joins iff no child did; a bypass vertex iff some child did.
pub fn misb_combine(v: &MisbVertexData, children: &[(bool, MisbEdgePair)]) -> bool {
    let none_in = v.a && children.iter().all(|(c, e)| !e.apply(*c));
    none_in != v.bypass
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Misb;

impl Misb {
    pub fn instance(&self, x: &Expanded) -> Instance<Misb> {
        Instance::build(
            x.tree.clone(),
            |v| MisbVertexData::new(x.bypass[v]),
            |_| MisbEdgePair::FRESH,
        )
    }
}

impl UnaryAlgebra for Misb {
    type Node = MisbVertexData;
    type Edge = MisbEdgePair;
    type Value = bool;

    fn resolve(&self, node: &MisbVertexData, children: &[(&MisbEdgePair, &bool)]) -> bool {
        let kids: Vec<_> = children.iter().map(|(e, c)| (**c, **e)).collect();
        misb_combine(node, &kids)
    }

    fn rake(&self, parent: &mut MisbVertexData, _: usize, edge: &MisbEdgePair, leaf: &bool) {
        parent.a &= !edge.apply(*leaf);
    }

    fn compress(
        &self,
        upper: &MisbEdgePair,
        mid: &MisbVertexData,
        lower: &MisbEdgePair,
    ) -> Option<MisbEdgePair> {
        let through = |x: bool| upper.apply(misb_combine(mid, &[(x, *lower)]));
        Some(MisbEdgePair {
            w1: through(true),
            w2: through(false),
        })
    }

    fn merge_leaves(
        &self,
        a: (&MisbVertexData, &MisbEdgePair),
        b: (&MisbVertexData, &MisbEdgePair),
    ) -> Option<(MisbVertexData, MisbEdgePair)> {
        let hit = a.1.apply(self.resolve(a.0, &[])) || b.1.apply(self.resolve(b.0, &[]));
        Some((
            MisbVertexData::new(false),
            MisbEdgePair { w1: hit, w2: hit },
        ))
    }

    fn node_bits(&self, _: &MisbVertexData) -> u64 {
        2
    }

    fn edge_bits(&self, _: &MisbEdgePair) -> u64 {
        2
    }

    fn name(&self) -> &'static str {
        "misb"
    }
}
