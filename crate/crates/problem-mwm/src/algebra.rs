use contraction_engine::{lift_unary, Contracted, EngineError, Instance, MemberView, UnaryAlgebra};
use tree_core::{int_bits, Tree};

use crate::dp::{contract_chain, cut_off, dp_combine, gain, keep, trim_leaves};
use crate::dp::{MwmEdgeTuple, MwmValue, MwmVertexData};
use crate::ext::NegInf;

/// Per-vertex payload budget constant: a residual node stores two integers
/// and an edge tuple of four.
pub const MWM_C_W: u64 = 16;

/// The matching algebra over vertex constants and edge tuples.
#[derive(Debug, Clone, Copy)]
pub struct Mwm {
    word_bits: u64,
}

impl Mwm {
    /// `ew` holds the edge weights; sums of them bound every stored number.
    pub fn for_weights(ew: &[i64]) -> Self {
        let total = ew
            .iter()
            .fold(0i64, |s, w| s.saturating_add(w.saturating_abs()));
        Mwm {
            word_bits: int_bits(total),
        }
    }

    /// Instance over `tree`, `ew[v]` weighing the edge from `v` to its parent.
    pub fn instance(&self, tree: Tree, ew: &[i64]) -> Instance<Mwm> {
        Instance::build(
            tree,
            |_| MwmVertexData::default(),
            |v| MwmEdgeTuple::fresh(ew[v]),
        )
    }
}

impl UnaryAlgebra for Mwm {
    type Node = MwmVertexData;
    type Edge = MwmEdgeTuple;
    type Value = MwmValue;

    fn resolve(&self, node: &MwmVertexData, children: &[(&MwmEdgeTuple, &MwmValue)]) -> MwmValue {
        let kids: Vec<_> = children
            .iter()
            .enumerate()
            .map(|(i, (e, v))| (i, **v, **e))
            .collect();
        dp_combine(node, &kids).0
    }

    fn rake(&self, parent: &mut MwmVertexData, _: usize, edge: &MwmEdgeTuple, leaf: &MwmValue) {
        trim_leaves(parent, &[(*leaf, *edge)]);
    }

    fn compress(
        &self,
        upper: &MwmEdgeTuple,
        mid: &MwmVertexData,
        lower: &MwmEdgeTuple,
    ) -> Option<MwmEdgeTuple> {
        Some(contract_chain(upper, lower, cut_off(mid)))
    }

    /// Two sibling leaves hang from a virtual vertex that carries all their
    /// weight on a single edge: keeping it unmatched is worth the summed
    /// contributions, matching along it the best single gain on top.
    fn merge_leaves(
        &self,
        a: (&MwmVertexData, &MwmEdgeTuple),
        b: (&MwmVertexData, &MwmEdgeTuple),
    ) -> Option<(MwmVertexData, MwmEdgeTuple)> {
        let va = cut_off(a.0);
        let vb = cut_off(b.0);
        let base = keep(a.1, va) + keep(b.1, vb);
        let best = gain(a.1, va).max(gain(b.1, vb));
        Some((
            MwmVertexData::default(),
            MwmEdgeTuple {
                w1: base + best,
                w2: NegInf,
                w3: NegInf,
                w4: base,
            },
        ))
    }

    fn node_bits(&self, n: &MwmVertexData) -> u64 {
        int_bits(n.a) + int_bits(n.b)
    }

    fn edge_bits(&self, e: &MwmEdgeTuple) -> u64 {
        e.bits()
    }

    fn payload_constant(&self) -> Option<u64> {
        Some(MWM_C_W)
    }

    fn word_bits(&self) -> u64 {
        self.word_bits
    }

    fn name(&self) -> &'static str {
        "mwm"
    }
}

/// A contracted component: the residual and its external children.
pub type MwmComponentResidual = Contracted<MwmVertexData, MwmEdgeTuple>;

/// Connected contraction of one component (root first, then preorder).
pub fn mwm_connected_contract(
    alg: &Mwm,
    n: usize,
    members: &[MemberView<'_, MwmVertexData, MwmEdgeTuple>],
) -> Result<MwmComponentResidual, EngineError> {
    lift_unary(alg, n).connected(members)
}

/// Sibling contraction of finished leaves of one parent into one leaf.
pub fn mwm_sibling_contract(
    alg: &Mwm,
    leaves: &[(MwmVertexData, MwmEdgeTuple)],
) -> (MwmVertexData, MwmEdgeTuple) {
    let refs: Vec<_> = leaves.iter().map(|(n, e)| (n, e)).collect();
    lift_unary(alg, 1)
        .merge(&refs)
        .expect("matching leaves always merge")
}
