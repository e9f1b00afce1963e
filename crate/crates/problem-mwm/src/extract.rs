use ampc_sim::SimConfig;
use tree_core::{Tree, VertexId};

use crate::dp::{dp_combine, MwmEdgeTuple, MwmValue, MwmVertexData};

/// Fault raised when the pointers do not form descending paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointerCycle(pub VertexId);

impl std::fmt::Display for PointerCycle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "match pointer of {} does not name a child", self.0)
    }
}

impl std::error::Error for PointerCycle {}

/// A matching read off the pointers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extraction {
    /// Matched edges named by their child endpoint, ascending.
    pub edges: Vec<VertexId>,
    /// Segmentation levels needed to resolve the longest pointer path.
    pub levels: usize,
    /// AMPC rounds charged for the pointer computation and the path resolution.
    pub rounds: u64,
}

/// The child each vertex would match into when free, from reconstructed
/// values and the original edge weights.
pub fn match_pointers(tree: &Tree, values: &[MwmValue], ew: &[i64]) -> Vec<Option<VertexId>> {
    (0..tree.len())
        .map(|v| {
            let kids: Vec<_> = tree
                .children(v)
                .iter()
                .map(|&u| (u, values[u], MwmEdgeTuple::fresh(ew[u])))
                .collect();
            dp_combine(&MwmVertexData::default(), &kids).1
        })
        .collect()
}

/// Resolves the pointers top-down. Pointer edges form vertex-disjoint
/// descending paths; along each path, matched and unmatched edges alternate
/// starting from its head. Paths are cut into segments of `n^eps` vertices,
/// each segment collapsed to one, until every path is a single segment; the
/// parities then unroll level by level.
pub fn extract_matching(
    tree: &Tree,
    ptr: &[Option<VertexId>],
    cfg: &SimConfig,
) -> Result<Extraction, PointerCycle> {
    let n = tree.len();
    let mut pointed = vec![false; n];
    for (v, p) in ptr.iter().enumerate() {
        if let Some(u) = *p {
            if tree.parent(u) != Some(v) || pointed[u] {
                return Err(PointerCycle(v));
            }
            pointed[u] = true;
        }
    }

    // Position along the path decides the parity; heads are unpointed.
    let mut longest = 0usize;
    let mut edges = Vec::new();
    for head in (0..n).filter(|&v| !pointed[v]) {
        let mut len = 1;
        let mut at = head;
        let mut matched = false;
        while let Some(u) = ptr[at] {
            if !matched {
                edges.push(u);
            }
            matched = !matched;
            len += 1;
            at = u;
        }
        longest = longest.max(len);
    }
    edges.sort_unstable();

    let fan = cfg.fan();
    let mut levels = 0;
    let mut len = longest;
    while len > 1 {
        len = len.div_ceil(fan);
        levels += 1;
    }
    let rounds = cfg.inv_eps() + 2 * levels as u64;
    Ok(Extraction {
        edges,
        levels,
        rounds,
    })
}
