use ampc_sim::{Metrics, SimConfig};
use contraction_engine::{
    reconstruct, tree_contract, ContractionLog, EngineError, Instance, RunStats, UnaryAlgebra,
};
use problem_mwm::Ext;
use serde::{Deserialize, Serialize};
use tree_core::{int_bits, Tree};

/// Constants absorbed into a vertex: the best total of finished children
/// when the vertex is in the set (its own weight included) and when it is out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MwisVertexData {
    pub with: i64,
    pub without: i64,
}

/// Best weight of the hidden interior of a contracted path, indexed by
/// `[upper end in][lower end in]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MwisEdgeTuple(pub [[Ext; 2]; 2]);

const IN: usize = 1;
const OUT: usize = 0;

impl MwisEdgeTuple {
    /// A real edge: both ends in is forbidden.
    pub fn fresh() -> Self {
        MwisEdgeTuple([[Ext::Fin(0), Ext::Fin(0)], [Ext::Fin(0), Ext::NegInf]])
    }

    /// Contribution of a child with `(with, without)` to its parent in state `top`.
    pub fn carry(&self, top: usize, v: (i64, i64)) -> i64 {
        let best = (self.0[top][IN] + v.0).max(self.0[top][OUT] + v.1);
        best.finite().expect("the lower end can always be left out")
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Mwis {
    word_bits: u64,
}

impl Mwis {
    pub fn for_weights(vw: &[i64]) -> Self {
        let total = vw
            .iter()
            .fold(0i64, |s, w| s.saturating_add(w.saturating_abs()));
        Mwis {
            word_bits: int_bits(total),
        }
    }

    pub fn instance(&self, tree: Tree, vw: &[i64]) -> Instance<Mwis> {
        Instance::build(
            tree,
            |v| MwisVertexData {
                with: vw[v],
                without: 0,
            },
            |_| MwisEdgeTuple::fresh(),
        )
    }
}

impl UnaryAlgebra for Mwis {
    type Node = MwisVertexData;
    type Edge = MwisEdgeTuple;
    /// `(best with the vertex, best without it)` on its subtree.
    type Value = (i64, i64);

    fn resolve(
        &self,
        node: &MwisVertexData,
        children: &[(&MwisEdgeTuple, &(i64, i64))],
    ) -> (i64, i64) {
        let mut v = (node.with, node.without);
        for (e, c) in children {
            v.0 += e.carry(IN, **c);
            v.1 += e.carry(OUT, **c);
        }
        v
    }

    fn rake(&self, parent: &mut MwisVertexData, _: usize, edge: &MwisEdgeTuple, leaf: &(i64, i64)) {
        parent.with += edge.carry(IN, *leaf);
        parent.without += edge.carry(OUT, *leaf);
    }

    fn compress(
        &self,
        upper: &MwisEdgeTuple,
        mid: &MwisVertexData,
        lower: &MwisEdgeTuple,
    ) -> Option<MwisEdgeTuple> {
        let own = [mid.without, mid.with];
        let mut t = [[Ext::NegInf; 2]; 2];
        for (g, row) in t.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = (0..2)
                    .map(|p| upper.0[g][p] + own[p] + lower.0[p][c])
                    .max()
                    .unwrap();
            }
        }
        Some(MwisEdgeTuple(t))
    }

    fn merge_leaves(
        &self,
        a: (&MwisVertexData, &MwisEdgeTuple),
        b: (&MwisVertexData, &MwisEdgeTuple),
    ) -> Option<(MwisVertexData, MwisEdgeTuple)> {
        let va = (a.0.with, a.0.without);
        let vb = (b.0.with, b.0.without);
        let top_in = a.1.carry(IN, va) + b.1.carry(IN, vb);
        let top_out = a.1.carry(OUT, va) + b.1.carry(OUT, vb);
        Some((
            MwisVertexData {
                with: 0,
                without: 0,
            },
            MwisEdgeTuple([
                [Ext::Fin(top_out), Ext::NegInf],
                [Ext::Fin(top_in), Ext::NegInf],
            ]),
        ))
    }

    fn node_bits(&self, n: &MwisVertexData) -> u64 {
        int_bits(n.with) + int_bits(n.without)
    }

    fn edge_bits(&self, e: &MwisEdgeTuple) -> u64 {
        e.0.iter().flatten().map(|x| x.bits()).sum()
    }

    fn payload_constant(&self) -> Option<u64> {
        Some(problem_mwm::MWM_C_W)
    }

    fn word_bits(&self) -> u64 {
        self.word_bits
    }

    fn name(&self) -> &'static str {
        "mwis"
    }
}

#[derive(Debug, Clone)]
pub struct MwisSolution {
    pub value: i64,
    pub set: Vec<bool>,
    pub values: Vec<(i64, i64)>,
    pub metrics: Metrics,
    pub stats: RunStats,
    pub extra_rounds: u64,
    pub log: ContractionLog<MwisVertexData, MwisEdgeTuple>,
}

/// Maximum weight independent set. The set is read top-down: the root joins
/// when that is strictly better, and a vertex below an excluded parent joins
/// under the same rule.
pub fn mwis_solve(tree: &Tree, vw: &[i64], cfg: &SimConfig) -> Result<MwisSolution, EngineError> {
    if vw.len() != tree.len() {
        return Err(EngineError::Instance(format!(
            "{} vertices but {} weights",
            tree.len(),
            vw.len()
        )));
    }
    if let Some(v) = vw.iter().position(|&w| w < 0) {
        return Err(EngineError::Instance(format!(
            "vertex {v} has a negative weight"
        )));
    }
    let alg = Mwis::for_weights(vw);
    let out = tree_contract(&alg, &alg.instance(tree.clone(), vw), cfg)?;
    let values = reconstruct(&alg, &out.log)?;
    let mut set = vec![false; tree.len()];
    for v in tree.preorder() {
        let parent_in = tree.parent(v).is_some_and(|p| set[p]);
        set[v] = !parent_in && values[v].0 > values[v].1;
    }
    // The top-down choice is a per-vertex function of the parent's bit,
    // composed along root paths by segment doubling.
    let fan = cfg.fan().max(2);
    let mut levels = 0u64;
    let mut h = tree.height() + 1;
    while h > 1 {
        h = h.div_ceil(fan);
        levels += 1;
    }
    Ok(MwisSolution {
        value: out.answer.0.max(out.answer.1),
        set,
        values,
        extra_rounds: out.metrics.phases.len() as u64 + 2 * levels,
        metrics: out.metrics,
        stats: out.stats,
        log: out.log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(t: Tree, vw: &[i64]) -> MwisSolution {
        mwis_solve(&t, vw, &SimConfig::new(t.len(), 0.5).strict(true)).unwrap()
    }

    #[test]
    fn single_vertex() {
        let s = solve(Tree::single(), &[9]);
        assert_eq!((s.value, s.set), (9, vec![true]));
    }

    #[test]
    fn three_path() {
        let t = Tree::from_parents(&[None, Some(0), Some(1)]).unwrap();
        let s = solve(t, &[5, 1, 5]);
        assert_eq!((s.value, s.set), (10, vec![true, false, true]));
    }

    #[test]
    fn star_center_against_leaves() {
        let t = Tree::from_parents(&[None, Some(0), Some(0), Some(0)]).unwrap();
        let s = solve(t, &[10, 4, 4, 4]);
        assert_eq!((s.value, s.set), (12, vec![false, true, true, true]));
    }
}
