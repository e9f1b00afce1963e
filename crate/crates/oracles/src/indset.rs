use crate::matching::CapExceeded;
use tree_core::{Tree, VertexId};

pub const SUBSET_CAP: usize = 20;

/// Bottom-up greedy: leaves join, an internal vertex joins iff no child did.
/// With `bypass` flags, a bypass vertex joins iff some child did.
pub fn greedy_misb(tree: &Tree, bypass: &[bool]) -> Vec<bool> {
    let mut inset = vec![false; tree.len()];
    for v in tree.postorder() {
        let any = tree.children(v).iter().any(|&c| inset[c]);
        inset[v] = if bypass[v] { any } else { !any };
    }
    inset
}

pub fn greedy_mis(tree: &Tree) -> Vec<bool> {
    greedy_misb(tree, &vec![false; tree.len()])
}

pub fn is_independent(tree: &Tree, set: &[bool]) -> bool {
    tree.edges().all(|(c, p)| !(set[c] && set[p]))
}

pub fn is_maximal_independent(tree: &Tree, set: &[bool]) -> bool {
    if !is_independent(tree, set) {
        return false;
    }
    (0..tree.len()).all(|v| {
        set[v] || tree.parent(v).is_some_and(|p| set[p]) || tree.children(v).iter().any(|&c| set[c])
    })
}

/// Every maximal independent set, as bitmasks.
pub fn brute_maximal_independent_sets(tree: &Tree) -> Result<Vec<u32>, CapExceeded> {
    let n = tree.len();
    if n > SUBSET_CAP {
        return Err(CapExceeded { n, cap: SUBSET_CAP });
    }
    let edges: Vec<(usize, usize)> = tree.edges().collect();
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let set: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 1).collect();
        if edges.iter().any(|&(c, p)| set[c] && set[p]) {
            continue;
        }
        if is_maximal_independent(tree, &set) {
            out.push(mask);
        }
    }
    Ok(out)
}

pub fn to_mask(set: &[bool]) -> u32 {
    set.iter()
        .enumerate()
        .fold(0, |m, (v, &b)| if b { m | 1 << v } else { m })
}

/// Best independent-set weight by subset enumeration.
pub fn brute_mwis(tree: &Tree, vw: &[i64]) -> Result<i64, CapExceeded> {
    let n = tree.len();
    if n > SUBSET_CAP {
        return Err(CapExceeded { n, cap: SUBSET_CAP });
    }
    let edges: Vec<(usize, usize)> = tree.edges().collect();
    let mut best = 0;
    for mask in 0u32..(1u32 << n) {
        if edges
            .iter()
            .any(|&(c, p)| mask >> c & 1 == 1 && mask >> p & 1 == 1)
        {
            continue;
        }
        let w: i64 = (0..n).filter(|&v| mask >> v & 1 == 1).map(|v| vw[v]).sum();
        best = best.max(w);
    }
    Ok(best)
}

/// Sequential in/out table: `(best with v, best without v)` per subtree.
pub fn mwis_table(tree: &Tree, vw: &[i64]) -> Vec<(i64, i64)> {
    let mut rows = vec![(0, 0); tree.len()];
    for v in tree.postorder() {
        let mut with = vw[v];
        let mut without = 0;
        for &c in tree.children(v) {
            with += rows[c].1;
            without += rows[c].0.max(rows[c].1);
        }
        rows[v] = (with, without);
    }
    rows
}

pub fn set_weight(set: &[bool], vw: &[i64]) -> i64 {
    set.iter()
        .zip(vw)
        .filter(|(&b, _)| b)
        .map(|(_, &w)| w)
        .sum()
}

/// Bottom-up greedy maximal matching: each vertex takes its first child that
/// is still free. Edges are named by child endpoint.
pub fn greedy_maximal_matching(tree: &Tree) -> Vec<VertexId> {
    let free = greedy_mis(tree);
    let mut out: Vec<VertexId> = (0..tree.len())
        .filter(|&v| !free[v])
        .filter_map(|v| tree.children(v).iter().copied().find(|&c| free[c]))
        .collect();
    out.sort_unstable();
    out
}
