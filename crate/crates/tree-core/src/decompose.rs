use crate::error::TreeError;
use crate::tree::{Tree, VertexId};

/// Contiguous preorder groups `V_i = {l_{i-1}+1, ..., l_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreorderDecomposition {
    pub boundaries: Vec<usize>,
    pub lambda: usize,
}

impl PreorderDecomposition {
    pub fn k(&self) -> usize {
        self.boundaries.len() - 1
    }

    /// Vertices of each group, given the preorder vertex list.
    pub fn groups<'a>(&self, order: &'a [VertexId]) -> Vec<&'a [VertexId]> {
        self.boundaries
            .windows(2)
            .map(|w| &order[w[0]..w[1]])
            .collect()
    }

    /// Group index of every vertex.
    pub fn group_of(&self, order: &[VertexId], n: usize) -> Vec<usize> {
        let mut g = vec![0; n];
        for (i, w) in self.boundaries.windows(2).enumerate() {
            for &v in &order[w[0]..w[1]] {
                g[v] = i;
            }
        }
        g
    }

    pub fn is_valid_for(&self, n: usize) -> bool {
        self.boundaries.first() == Some(&0)
            && self.boundaries.last() == Some(&n)
            && self.boundaries.windows(2).all(|w| w[0] < w[1])
    }
}

/// Greedy left-to-right packing of `weights` (indexed by preorder position).
/// A group is extended while its sum stays within `budget` and is closed
/// as soon as the sum reaches `budget` exactly.
pub fn pack_greedy(weights: &[usize], budget: usize) -> Vec<usize> {
    let mut boundaries = vec![0];
    let mut sum = 0;
    let mut open = false;
    for (i, &w) in weights.iter().enumerate() {
        if open && sum + w > budget {
            boundaries.push(i);
            sum = 0;
        }
        sum += w;
        open = true;
        if sum >= budget {
            boundaries.push(i + 1);
            sum = 0;
            open = false;
        }
    }
    if open {
        boundaries.push(weights.len());
    }
    boundaries
}

/// Degree-weighted preorder decomposition with per-group degree sum at most `lambda`.
pub fn decompose(tree: &Tree, lambda: usize) -> Result<PreorderDecomposition, TreeError> {
    assert!(lambda >= 1, "lambda must be positive");
    if let Some(v) = (0..tree.len()).find(|&v| tree.deg(v) > lambda) {
        return Err(TreeError::DegreeAbove {
            vertex: v,
            degree: tree.deg(v),
            limit: lambda,
        });
    }
    let weights: Vec<usize> = tree.preorder().iter().map(|&v| tree.deg(v)).collect();
    Ok(PreorderDecomposition {
        boundaries: pack_greedy(&weights, lambda),
        lambda,
    })
}

/// Connected pieces of the forest each group induces, in preorder.
pub fn group_components(
    tree: &Tree,
    decomp: &PreorderDecomposition,
) -> Vec<(usize, Vec<Vec<VertexId>>)> {
    let order = tree.preorder();
    let group = decomp.group_of(&order, tree.len());
    let mut comp_of = vec![usize::MAX; tree.len()];
    let mut out = Vec::with_capacity(decomp.k());
    for (i, members) in decomp.groups(&order).into_iter().enumerate() {
        assert!(!members.is_empty(), "empty group {i}");
        let mut comps: Vec<Vec<VertexId>> = Vec::new();
        for &v in members {
            match tree.parent(v) {
                Some(p) if group[p] == i => {
                    comp_of[v] = comp_of[p];
                    comps[comp_of[v]].push(v);
                }
                _ => {
                    comp_of[v] = comps.len();
                    comps.push(vec![v]);
                }
            }
        }
        out.push((i, comps));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepNode {
    pub group: usize,
    pub members: Vec<VertexId>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub dependent: bool,
}

/// Minor obtained by contracting every within-group component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyTree {
    pub nodes: Vec<DepNode>,
    pub node_of: Vec<usize>,
}

impl DependencyTree {
    pub fn dependent_per_group(&self, k: usize) -> Vec<usize> {
        let mut count = vec![0; k];
        for node in &self.nodes {
            if node.dependent {
                count[node.group] += 1;
            }
        }
        count
    }
}

pub fn dependency_tree(tree: &Tree, decomp: &PreorderDecomposition) -> DependencyTree {
    let mut nodes = Vec::new();
    let mut node_of = vec![0; tree.len()];
    for (group, comps) in group_components(tree, decomp) {
        for members in comps {
            for &v in &members {
                node_of[v] = nodes.len();
            }
            nodes.push(DepNode {
                group,
                members,
                parent: None,
                children: Vec::new(),
                dependent: false,
            });
        }
    }
    for id in 0..nodes.len() {
        let top = nodes[id].members[0];
        if let Some(p) = tree.parent(top) {
            let pid = node_of[p];
            nodes[id].parent = Some(pid);
            nodes[pid].children.push(id);
            nodes[pid].dependent = true;
        }
    }
    DependencyTree { nodes, node_of }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Tree {
        let p: Vec<_> = (0..n).map(|v| v.checked_sub(1)).collect();
        Tree::from_parents(&p).unwrap()
    }

    fn star(leaves: usize) -> Tree {
        let p: Vec<_> = (0..=leaves)
            .map(|v| if v == 0 { None } else { Some(0) })
            .collect();
        Tree::from_parents(&p).unwrap()
    }

    #[test]
    fn path_of_four() {
        let d = decompose(&path(4), 2).unwrap();
        assert_eq!(d.boundaries, vec![0, 2, 4]);
        let comps = group_components(&path(4), &d);
        assert_eq!(comps, vec![(0, vec![vec![0, 1]]), (1, vec![vec![2, 3]])]);
        let dt = dependency_tree(&path(4), &d);
        assert_eq!(dt.nodes.len(), 2);
        assert!(dt.nodes[0].dependent);
        assert!(!dt.nodes[1].dependent);
        assert_eq!(dt.nodes[1].parent, Some(0));
    }

    #[test]
    fn single_vertex_one_group() {
        for lambda in 1..4 {
            assert_eq!(
                decompose(&Tree::single(), lambda).unwrap().boundaries,
                vec![0, 1]
            );
        }
        let d = decompose(&Tree::single(), 1).unwrap();
        let dt = dependency_tree(&Tree::single(), &d);
        assert_eq!(dt.nodes.len(), 1);
        assert!(!dt.nodes[0].dependent);
    }

    #[test]
    fn star_root_alone() {
        let t = star(3);
        let d = decompose(&t, 3).unwrap();
        assert_eq!(d.boundaries, vec![0, 1, 4]);
        let comps = group_components(&t, &d);
        assert_eq!(comps[0].1, vec![vec![0]]);
        assert_eq!(comps[1].1, vec![vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn degree_above_lambda_names_vertex() {
        assert_eq!(
            decompose(&star(3), 2),
            Err(TreeError::DegreeAbove {
                vertex: 0,
                degree: 3,
                limit: 2
            })
        );
    }

    #[test]
    fn whole_tree_one_group_is_independent() {
        let t = path(3);
        let d = decompose(&t, 10).unwrap();
        assert_eq!(d.k(), 1);
        let dt = dependency_tree(&t, &d);
        assert_eq!(dt.nodes.len(), 1);
        assert!(!dt.nodes[0].dependent);
    }

    #[test]
    fn pack_greedy_closes_at_budget() {
        assert_eq!(pack_greedy(&[1, 1, 1, 0], 2), vec![0, 2, 4]);
        assert_eq!(pack_greedy(&[3, 0, 0, 0], 3), vec![0, 1, 4]);
        assert_eq!(pack_greedy(&[2, 2, 0, 1], 3), vec![0, 1, 4]);
        assert_eq!(pack_greedy(&[], 3), vec![0]);
    }
}
