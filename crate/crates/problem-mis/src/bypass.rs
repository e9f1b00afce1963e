use tree_core::{Tree, VertexId};

/// A tree whose high-degree vertices were replaced by scaffolds of bypass
/// vertices. Original vertices keep their ids; bypass vertices follow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expanded {
    pub tree: Tree,
    pub bypass: Vec<bool>,
    pub n_orig: usize,
}

impl Expanded {
    pub fn is_bypass(&self, v: VertexId) -> bool {
        self.bypass[v]
    }

    pub fn bypass_count(&self) -> usize {
        self.tree.len() - self.n_orig
    }
}

/// Hangs the children of every vertex with more than `fan` of them below an
/// almost complete `fan`-ary scaffold of bypass vertices. Children are packed
/// left to right; a group of one is passed up unwrapped, so every bypass
/// vertex has at least two children and the result has fewer than `2n`
/// vertices.
pub fn bypass_expand(tree: &Tree, fan: usize) -> Expanded {
    assert!(fan >= 2, "fan-out must be at least 2");
    let n = tree.len();
    let mut parents: Vec<Option<VertexId>> = tree.parents().to_vec();
    let mut orders: Vec<Vec<VertexId>> = (0..n).map(|v| tree.children(v).to_vec()).collect();
    for v in 0..n {
        let mut level = tree.children(v).to_vec();
        if level.len() <= fan {
            continue;
        }
        while level.len() > fan {
            let mut next = Vec::with_capacity(level.len().div_ceil(fan));
            for chunk in level.chunks(fan) {
                if chunk.len() == 1 {
                    next.push(chunk[0]);
                    continue;
                }
                let b = parents.len();
                parents.push(None);
                orders.push(chunk.to_vec());
                for &c in chunk {
                    parents[c] = Some(b);
                }
                next.push(b);
            }
            level = next;
        }
        for &c in &level {
            parents[c] = Some(v);
        }
        orders[v] = level;
    }
    let total = parents.len();
    let tree = Tree::from_parts(parents, orders).expect("scaffold keeps a tree");
    let mut bypass = vec![false; total];
    bypass[n..].iter_mut().for_each(|b| *b = true);
    Expanded {
        tree,
        bypass,
        n_orig: n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(n: usize) -> Tree {
        let parents: Vec<_> = (0..n).map(|v| (v > 0).then_some(0)).collect();
        Tree::from_parents(&parents).unwrap()
    }

    #[test]
    fn low_degree_is_identity() {
        let t = Tree::from_parents(&[None, Some(0), Some(0), Some(1)]).unwrap();
        let x = bypass_expand(&t, 2);
        assert_eq!(x.tree, t);
        assert_eq!(x.bypass_count(), 0);
    }

    #[test]
    fn star_of_seventeen() {
        let x = bypass_expand(&star(17), 4);
        assert_eq!(x.bypass_count(), 4);
        assert_eq!(x.tree.children(0), &[17, 18, 19, 20]);
        for (i, b) in (17..21).enumerate() {
            let want: Vec<_> = (1 + 4 * i..5 + 4 * i).collect();
            assert_eq!(x.tree.children(b), want.as_slice());
        }
        assert!(x.tree.max_degree() <= 4);
    }

    #[test]
    fn leftover_single_child_is_not_wrapped() {
        let x = bypass_expand(&star(6), 4);
        // five leaves: one bypass over 1..=4, leaf 5 hangs from the root
        assert_eq!(x.tree.children(0), &[6, 5]);
        assert_eq!(x.tree.children(6), &[1, 2, 3, 4]);
    }
}
