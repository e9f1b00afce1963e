use crate::error::TreeError;
use crate::tree::{Tree, VertexId};

/// 1-based preorder rank of every vertex.
pub fn preorder_number(tree: &Tree) -> Result<Vec<usize>, TreeError> {
    let order = tree.preorder();
    if order.len() != tree.len() {
        return Err(TreeError::Cycle(tree.root()));
    }
    let mut rank = vec![0; tree.len()];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i + 1;
    }
    Ok(rank)
}

/// Inverse of a rank map: `order[r - 1]` is the vertex with rank `r`.
pub fn order_from_ranks(rank: &[usize]) -> Vec<VertexId> {
    let mut order = vec![0; rank.len()];
    for (v, &r) in rank.iter().enumerate() {
        order[r - 1] = v;
    }
    order
}
