use num_rational::Ratio;

use crate::tree::{Tree, VertexId};

/// Maximal connected set of vertices with degree below the threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowComponent {
    /// Members in preorder; the first one is the component root.
    pub members: Vec<VertexId>,
    /// True when no member has a child outside the component.
    pub is_leaf: bool,
}

impl LowComponent {
    pub fn root(&self) -> VertexId {
        self.members[0]
    }
}

/// Components of `{v : deg(v) < alpha}`, in preorder of their roots.
pub fn low_degree_components(tree: &Tree, alpha: usize) -> Vec<LowComponent> {
    let low = |v: VertexId| tree.deg(v) < alpha;
    let mut comp_of = vec![usize::MAX; tree.len()];
    let mut comps: Vec<LowComponent> = Vec::new();
    for v in tree.preorder() {
        if !low(v) {
            continue;
        }
        match tree.parent(v) {
            Some(p) if low(p) => {
                comp_of[v] = comp_of[p];
                comps[comp_of[v]].members.push(v);
            }
            _ => {
                comp_of[v] = comps.len();
                comps.push(LowComponent {
                    members: vec![v],
                    is_leaf: true,
                });
            }
        }
    }
    for v in 0..tree.len() {
        if low(v) && tree.children(v).iter().any(|&c| !low(c)) {
            comps[comp_of[v]].is_leaf = false;
        }
    }
    comps
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BsKind {
    Big(VertexId),
    Small(Vec<VertexId>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BsNode {
    pub kind: BsKind,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

/// Minor of a tree with every maximal low-degree component contracted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigSmallTree {
    pub alpha: usize,
    pub nodes: Vec<BsNode>,
    pub root: usize,
}

impl BigSmallTree {
    pub fn build(tree: &Tree, alpha: usize) -> Self {
        let comps = low_degree_components(tree, alpha);
        let mut node_of = vec![usize::MAX; tree.len()];
        let mut nodes = Vec::new();
        for c in comps {
            for &v in &c.members {
                node_of[v] = nodes.len();
            }
            nodes.push(BsNode {
                kind: BsKind::Small(c.members),
                parent: None,
                children: Vec::new(),
            });
        }
        for v in tree.preorder() {
            if node_of[v] == usize::MAX {
                node_of[v] = nodes.len();
                nodes.push(BsNode {
                    kind: BsKind::Big(v),
                    parent: None,
                    children: Vec::new(),
                });
            }
        }
        for id in 0..nodes.len() {
            let top = match &nodes[id].kind {
                BsKind::Big(v) => *v,
                BsKind::Small(m) => m[0],
            };
            if let Some(p) = tree.parent(top) {
                let pid = node_of[p];
                nodes[id].parent = Some(pid);
                nodes[pid].children.push(id);
            }
        }
        BigSmallTree {
            alpha,
            root: node_of[tree.root()],
            nodes,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn leaves(&self) -> usize {
        self.nodes.iter().filter(|n| n.children.is_empty()).count()
    }

    /// No small component has a small component as parent.
    pub fn adjacency_holds(&self) -> bool {
        self.nodes.iter().all(|n| match (&n.kind, n.parent) {
            (BsKind::Small(_), Some(p)) => matches!(self.nodes[p].kind, BsKind::Big(_)),
            _ => true,
        })
    }
}

/// Leaves over nodes.
pub fn leaf_fraction(bst: &BigSmallTree) -> Ratio<usize> {
    Ratio::new(bst.leaves(), bst.len())
}

/// The lower bound `alpha / (alpha + 4)` on the post-compress leaf fraction.
pub fn leaf_fraction_bound(alpha: usize) -> Ratio<usize> {
    Ratio::new(alpha, alpha + 4)
}
