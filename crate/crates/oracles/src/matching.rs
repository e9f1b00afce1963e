use thiserror::Error;
use tree_core::{Tree, VertexId};

pub const ENUMERATION_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("exhaustive enumeration is capped at {cap} vertices, got {n}")]
pub struct CapExceeded {
    pub n: usize,
    pub cap: usize,
}

/// Sequential two-state table entry: `c` is the best matching in the subtree,
/// `c_prime` the best with the vertex unmatched, `ptr` the chosen child.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MwmRow {
    pub c: i64,
    pub c_prime: i64,
    pub ptr: Option<VertexId>,
}

/// Textbook bottom-up DP. `ew[v]` weighs the edge from `v` to its parent.
/// A child is selected only when its gain is strictly positive; equal gains
/// go to the smallest id.
pub fn mwm_table(tree: &Tree, ew: &[i64]) -> Vec<MwmRow> {
    let mut rows = vec![
        MwmRow {
            c: 0,
            c_prime: 0,
            ptr: None
        };
        tree.len()
    ];
    for v in tree.postorder() {
        let base: i64 = tree.children(v).iter().map(|&u| rows[u].c).sum();
        let mut best = (0i64, None);
        for &u in tree.children(v) {
            let gain = ew[u] + rows[u].c_prime - rows[u].c;
            let better = match best.1 {
                None => gain > best.0,
                Some(b) => gain > best.0 || (gain == best.0 && u < b),
            };
            if better {
                best = (gain, Some(u));
            }
        }
        rows[v] = MwmRow {
            c: base + best.0,
            c_prime: base,
            ptr: best.1,
        };
    }
    rows
}

/// Matching read off a table top-down; edges are named by their child endpoint.
pub fn matching_from_table(tree: &Tree, rows: &[MwmRow]) -> Vec<VertexId> {
    let mut taken = vec![false; tree.len()];
    let mut out = Vec::new();
    for v in tree.preorder() {
        if taken[v] {
            continue;
        }
        if let Some(u) = rows[v].ptr {
            taken[u] = true;
            out.push(u);
        }
    }
    out.sort_unstable();
    out
}

/// Best matching by enumeration: value and edges (child endpoints).
pub fn brute_mwm(tree: &Tree, ew: &[i64]) -> Result<(i64, Vec<VertexId>), CapExceeded> {
    if tree.len() > ENUMERATION_CAP {
        return Err(CapExceeded {
            n: tree.len(),
            cap: ENUMERATION_CAP,
        });
    }
    let edges: Vec<(VertexId, VertexId)> = tree.edges().collect();
    let mut used = vec![false; tree.len()];
    let mut cur = Vec::new();
    let mut best = (0i64, Vec::new());
    enumerate(&edges, 0, ew, &mut used, &mut cur, 0, &mut best);
    best.1.sort_unstable();
    Ok(best)
}

fn enumerate(
    edges: &[(VertexId, VertexId)],
    i: usize,
    ew: &[i64],
    used: &mut [bool],
    cur: &mut Vec<VertexId>,
    value: i64,
    best: &mut (i64, Vec<VertexId>),
) {
    if i == edges.len() {
        if value > best.0 {
            *best = (value, cur.clone());
        }
        return;
    }
    enumerate(edges, i + 1, ew, used, cur, value, best);
    let (c, p) = edges[i];
    if !used[c] && !used[p] {
        used[c] = true;
        used[p] = true;
        cur.push(c);
        enumerate(edges, i + 1, ew, used, cur, value + ew[c], best);
        cur.pop();
        used[c] = false;
        used[p] = false;
    }
}

/// Exhaustive below the cap, textbook DP above it.
pub fn mwm_value(tree: &Tree, ew: &[i64]) -> i64 {
    match brute_mwm(tree, ew) {
        Ok((v, _)) => v,
        Err(_) => mwm_table(tree, ew)[tree.root()].c,
    }
}

/// True when no vertex is covered twice; `edges` are child endpoints.
pub fn is_matching(tree: &Tree, edges: &[VertexId]) -> bool {
    let mut used = vec![false; tree.len()];
    for &c in edges {
        let Some(p) = tree.parent(c) else {
            return false;
        };
        if used[c] || used[p] {
            return false;
        }
        used[c] = true;
        used[p] = true;
    }
    true
}

/// A matching to which no tree edge can be added.
pub fn is_maximal_matching(tree: &Tree, edges: &[VertexId]) -> bool {
    if !is_matching(tree, edges) {
        return false;
    }
    let mut used = vec![false; tree.len()];
    for &c in edges {
        used[c] = true;
        used[tree.parent(c).unwrap()] = true;
    }
    tree.edges().all(|(c, p)| used[c] || used[p])
}

pub fn matching_weight(edges: &[VertexId], ew: &[i64]) -> i64 {
    edges.iter().map(|&c| ew[c]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    #[test]
    fn two_path() {
        let t = gen::path(2);
        assert_eq!(brute_mwm(&t, &[0, 5]).unwrap(), (5, vec![1]));
    }

    #[test]
    fn three_path() {
        let t = gen::path(3);
        assert_eq!(brute_mwm(&t, &[0, 5, 3]).unwrap().0, 5);
    }

    #[test]
    fn star_picks_heaviest() {
        let t = gen::star(4);
        let ew = [0, 2, 7, 4];
        assert_eq!(brute_mwm(&t, &ew).unwrap(), (7, vec![2]));
        let rows = mwm_table(&t, &ew);
        assert_eq!(
            rows[0],
            MwmRow {
                c: 7,
                c_prime: 0,
                ptr: Some(2)
            }
        );
    }

    #[test]
    fn table_agrees_with_enumeration() {
        for seed in 0..200 {
            let n = 1 + (seed as usize % 14);
            let t = gen::random_tree(n, seed);
            let ew = gen::random_weights(n, 1, 9, seed + 1000);
            let rows = mwm_table(&t, &ew);
            let (best, _) = brute_mwm(&t, &ew).unwrap();
            assert_eq!(rows[t.root()].c, best);
            let m = matching_from_table(&t, &rows);
            assert!(is_matching(&t, &m));
            assert_eq!(matching_weight(&m, &ew), best);
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(brute_mwm(&gen::path(17), &[1; 17]).is_err());
    }

    #[test]
    fn maximality_checker() {
        let t = gen::path(5);
        assert!(is_maximal_matching(&t, &[1, 3]));
        assert!(!is_maximal_matching(&t, &[1]));
        assert!(!is_matching(&t, &[1, 2]));
    }
}
