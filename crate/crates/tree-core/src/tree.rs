use crate::error::TreeError;

pub type VertexId = usize;

/// Rooted ordered tree over dense ids `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    parent: Vec<Option<VertexId>>,
    children: Vec<Vec<VertexId>>,
    root: VertexId,
}

impl Tree {
    /// Builds a tree from a parent array; children are ordered by id.
    pub fn from_parents(parents: &[Option<VertexId>]) -> Result<Self, TreeError> {
        let n = parents.len();
        let mut children = vec![Vec::new(); n];
        for (v, p) in parents.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n {
                    return Err(TreeError::OutOfRange(p));
                }
                children[p].push(v);
            }
        }
        Self::from_parts(parents.to_vec(), children)
    }

    /// Builds a tree from explicit parent and ordered children maps.
    pub fn from_parts(
        parent: Vec<Option<VertexId>>,
        children: Vec<Vec<VertexId>>,
    ) -> Result<Self, TreeError> {
        let n = parent.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        if children.len() != n {
            return Err(TreeError::Inconsistent(n.min(children.len())));
        }
        let mut root = None;
        for (v, p) in parent.iter().enumerate() {
            match *p {
                None => match root {
                    None => root = Some(v),
                    Some(r) => return Err(TreeError::MultipleRoots(r, v)),
                },
                Some(p) if p >= n => return Err(TreeError::OutOfRange(p)),
                Some(p) if p == v => return Err(TreeError::Cycle(v)),
                Some(_) => {}
            }
        }
        let root = root.ok_or(TreeError::NoRoot)?;
        let mut seen = vec![false; n];
        for (p, ch) in children.iter().enumerate() {
            for &c in ch {
                if c >= n {
                    return Err(TreeError::OutOfRange(c));
                }
                if parent[c] != Some(p) || seen[c] {
                    return Err(TreeError::Inconsistent(c));
                }
                seen[c] = true;
            }
        }
        for v in 0..n {
            if parent[v].is_some() && !seen[v] {
                return Err(TreeError::Inconsistent(v));
            }
        }
        let tree = Tree {
            parent,
            children,
            root,
        };
        // reachability from the root rules out cycles among non-root vertices
        let reached = tree.preorder().len();
        if reached != n {
            let mut hit = vec![false; n];
            for v in tree.preorder() {
                hit[v] = true;
            }
            let v = (0..n).find(|&v| !hit[v]).unwrap_or(0);
            return Err(TreeError::Cycle(v));
        }
        Ok(tree)
    }

    pub fn single() -> Self {
        Tree {
            parent: vec![None],
            children: vec![Vec::new()],
            root: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<VertexId>] {
        &self.parent
    }

    pub fn children(&self, v: VertexId) -> &[VertexId] {
        &self.children[v]
    }

    /// Number of children; the parent is not counted.
    pub fn deg(&self, v: VertexId) -> usize {
        self.children[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.children.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.children[v].is_empty()
    }

    pub fn leaves(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.len()).filter(|&v| self.is_leaf(v))
    }

    /// Vertices in preorder, children visited in stored order.
    pub fn preorder(&self) -> Vec<VertexId> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            out.push(v);
            if out.len() > self.len() {
                break;
            }
            stack.extend(self.children[v].iter().rev());
        }
        out
    }

    pub fn postorder(&self) -> Vec<VertexId> {
        let mut order = self.preorder();
        order.reverse();
        order
    }

    pub fn subtree_sizes(&self) -> Vec<usize> {
        let mut size = vec![1; self.len()];
        for v in self.postorder() {
            if let Some(p) = self.parent[v] {
                size[p] += size[v];
            }
        }
        size
    }

    /// Height of every vertex; leaves have height 0.
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0; self.len()];
        for v in self.postorder() {
            if let Some(p) = self.parent[v] {
                h[p] = h[p].max(h[v] + 1);
            }
        }
        h
    }

    pub fn height(&self) -> usize {
        self.heights()[self.root]
    }

    pub fn depths(&self) -> Vec<usize> {
        let mut d = vec![0; self.len()];
        for v in self.preorder() {
            if let Some(p) = self.parent[v] {
                d[v] = d[p] + 1;
            }
        }
        d
    }

    /// Non-root vertices paired with their parents.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.len()).filter_map(|v| self.parent[v].map(|p| (v, p)))
    }

    /// Renames vertex `v` to `perm[v]`, keeping child order.
    pub fn relabel(&self, perm: &[VertexId]) -> Result<Tree, TreeError> {
        let n = self.len();
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        for v in 0..n {
            parent[perm[v]] = self.parent[v].map(|p| perm[p]);
            children[perm[v]] = self.children[v].iter().map(|&c| perm[c]).collect();
        }
        Tree::from_parts(parent, children)
    }

    /// Same tree with every child list reordered by `order`.
    pub fn with_child_order<F>(&self, mut order: F) -> Tree
    where
        F: FnMut(VertexId, &mut Vec<VertexId>),
    {
        let mut children = self.children.clone();
        for (v, ch) in children.iter_mut().enumerate() {
            order(v, ch);
        }
        Tree {
            parent: self.parent.clone(),
            children,
            root: self.root,
        }
    }
}
