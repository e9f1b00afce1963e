use ampc_sim::{Metrics, SimConfig};
use contraction_engine::{
    bounded_tree_contract, reconstruct, ContractionLog, EngineError, RunStats,
};
use tree_core::{Tree, VertexId};

use crate::bypass::{bypass_expand, Expanded};
use crate::misb::{Misb, MisbEdgePair, MisbVertexData};

/// A maximal independent set with the run behind it.
#[derive(Debug, Clone)]
pub struct MisSolution {
    /// Membership of each original vertex.
    pub set: Vec<bool>,
    /// Bits of every vertex of the expanded tree, bypass vertices included.
    pub bits: Vec<bool>,
    pub expanded: Expanded,
    pub metrics: Metrics,
    pub stats: RunStats,
    /// Rounds outside the contraction: scaffold construction and replay.
    pub extra_rounds: u64,
    pub log: ContractionLog<MisbVertexData, MisbEdgePair>,
}

impl MisSolution {
    pub fn total_rounds(&self) -> u64 {
        self.metrics.rounds + self.extra_rounds
    }

    pub fn members(&self) -> Vec<VertexId> {
        (0..self.set.len()).filter(|&v| self.set[v]).collect()
    }
}

/// Greedy maximal independent set: bypass scaffolds bring every degree down
/// to `n^eps`, the bounded-degree contraction evaluates the bypass variant,
/// and original vertices with bit 1 form the set.
pub fn mis_solve(tree: &Tree, cfg: &SimConfig) -> Result<MisSolution, EngineError> {
    let x = bypass_expand(tree, cfg.fan());
    let mut inner = cfg.clone();
    inner.n = x.tree.len();
    let inst = Misb.instance(&x);
    let out = bounded_tree_contract(&Misb, &inst, &inner)?;
    let bits = reconstruct(&Misb, &out.log)?;
    let set = bits[..x.n_orig].to_vec();
    let extra_rounds = cfg.inv_eps() + out.metrics.phases.len() as u64;
    Ok(MisSolution {
        set,
        bits,
        expanded: x,
        metrics: out.metrics,
        stats: out.stats,
        extra_rounds,
        log: out.log,
    })
}

/// A maximal matching with the run behind it.
#[derive(Debug, Clone)]
pub struct MatchingSolution {
    /// Matched edges named by their child endpoint, ascending.
    pub edges: Vec<VertexId>,
    pub metrics: Metrics,
    pub extra_rounds: u64,
}

/// Bottom-up greedy maximal matching. A vertex stays free exactly when all
/// of its children were taken, which is the independent-set rule, so the
/// free vertices are the set computed by [`mis_solve`]; each taken vertex
/// then picks its first free child.
pub fn maximal_matching_solve(
    tree: &Tree,
    cfg: &SimConfig,
) -> Result<MatchingSolution, EngineError> {
    let mis = mis_solve(tree, cfg)?;
    let free = &mis.set;
    let edges: Vec<VertexId> = (0..tree.len())
        .filter(|&v| !free[v])
        .filter_map(|v| tree.children(v).iter().copied().find(|&c| free[c]))
        .collect();
    let mut edges = edges;
    edges.sort_unstable();
    Ok(MatchingSolution {
        edges,
        extra_rounds: mis.extra_rounds + cfg.inv_eps(),
        metrics: mis.metrics,
    })
}
