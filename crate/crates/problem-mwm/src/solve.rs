use ampc_sim::{Metrics, SimConfig};
use contraction_engine::{reconstruct, tree_contract, ContractionLog, EngineError, RunStats};
use tree_core::{Tree, VertexId};

use crate::algebra::Mwm;
use crate::dp::{MwmEdgeTuple, MwmValue, MwmVertexData};
use crate::extract::{extract_matching, match_pointers, Extraction};

/// A maximum weight matching with the run that produced it.
#[derive(Debug, Clone)]
pub struct MwmSolution {
    pub value: i64,
    /// Matched edges named by their child endpoint.
    pub matching: Vec<VertexId>,
    /// Reconstructed `(c, c')` for every vertex.
    pub values: Vec<MwmValue>,
    pub metrics: Metrics,
    pub stats: RunStats,
    pub extraction: Extraction,
    pub log: ContractionLog<MwmVertexData, MwmEdgeTuple>,
}

impl MwmSolution {
    /// Contraction rounds plus the reverse replay and the matching read-off.
    pub fn total_rounds(&self) -> u64 {
        self.metrics.rounds + self.metrics.phases.len() as u64 + self.extraction.rounds
    }
}

/// Solves maximum weight matching; `ew[v]` weighs the edge from `v` to its
/// parent (the root's entry is ignored).
pub fn mwm_solve(tree: &Tree, ew: &[i64], cfg: &SimConfig) -> Result<MwmSolution, EngineError> {
    if ew.len() != tree.len() {
        return Err(EngineError::Instance(format!(
            "{} vertices but {} weights",
            tree.len(),
            ew.len()
        )));
    }
    let alg = Mwm::for_weights(ew);
    let inst = alg.instance(tree.clone(), ew);
    let out = tree_contract(&alg, &inst, cfg)?;
    let values = reconstruct(&alg, &out.log)?;
    let ptr = match_pointers(tree, &values, ew);
    let extraction =
        extract_matching(tree, &ptr, cfg).map_err(|e| EngineError::LogIntegrity(e.to_string()))?;
    Ok(MwmSolution {
        value: out.answer.c,
        matching: extraction.edges.clone(),
        values,
        metrics: out.metrics,
        stats: out.stats,
        extraction,
        log: out.log,
    })
}
