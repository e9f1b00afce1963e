use std::fmt::Debug;

use serde::de::DeserializeOwned;
use serde::Serialize;
use tree_core::{Tree, VertexId, DEFAULT_C_W};

use crate::error::EngineError;

/// Data a problem keeps per vertex and per edge, together with the unary
/// operations that contract one vertex at a time.
///
/// `Node` is the accumulator state of a vertex whose children may be partly
/// absorbed. `Edge` is a function applied to a child's value on its way to the
/// parent; it starts as the problem's edge datum and grows by composition when
/// a unary vertex is spliced out. `Value` is the per-vertex answer `P(v)`.
pub trait UnaryAlgebra: Send + Sync {
    type Node: Clone + Debug + PartialEq + Send + Sync + Serialize + DeserializeOwned;
    type Edge: Clone + Debug + PartialEq + Send + Sync + Serialize + DeserializeOwned;
    type Value: Clone + Debug + PartialEq + Send + Sync;

    /// Value of a vertex given its remaining children, in order.
    fn resolve(&self, node: &Self::Node, children: &[(&Self::Edge, &Self::Value)]) -> Self::Value;

    /// Absorbs a finished child. `index` is its position among the parent's
    /// remaining children.
    fn rake(&self, parent: &mut Self::Node, index: usize, edge: &Self::Edge, leaf: &Self::Value);

    /// Splices out `mid`, which has exactly one remaining child. `None` means
    /// the composite is not representable and the vertex must stay.
    fn compress(
        &self,
        upper: &Self::Edge,
        mid: &Self::Node,
        lower: &Self::Edge,
    ) -> Option<Self::Edge>;

    /// Replaces two finished leaves of one parent by a single leaf with the
    /// same combined effect on that parent. Only needed by the generalized
    /// algorithm; `None` marks algebras that never see high-degree vertices.
    fn merge_leaves(
        &self,
        first: (&Self::Node, &Self::Edge),
        second: (&Self::Node, &Self::Edge),
    ) -> Option<(Self::Node, Self::Edge)>;

    fn node_bits(&self, node: &Self::Node) -> u64;
    fn edge_bits(&self, edge: &Self::Edge) -> u64;

    /// Payload constant for the per-vertex bit budget; `None` disables the check.
    fn payload_constant(&self) -> Option<u64> {
        Some(DEFAULT_C_W)
    }

    /// Width of the widest number a payload may hold. The budget counts
    /// words of `max(log n, word_bits)` bits, so weights beyond `poly(n)`
    /// do not read as a budget breach.
    fn word_bits(&self) -> u64 {
        0
    }

    fn name(&self) -> &'static str;
}

/// A tree with initial vertex data and the data on each vertex's parent edge.
#[derive(Debug, Clone)]
pub struct Instance<A: UnaryAlgebra> {
    pub tree: Tree,
    pub nodes: Vec<A::Node>,
    pub up: Vec<Option<A::Edge>>,
}

impl<A: UnaryAlgebra> Instance<A> {
    pub fn new(
        tree: Tree,
        nodes: Vec<A::Node>,
        up: Vec<Option<A::Edge>>,
    ) -> Result<Self, EngineError> {
        let n = tree.len();
        if nodes.len() != n || up.len() != n {
            return Err(EngineError::Instance(format!(
                "{n} vertices but {} node and {} edge entries",
                nodes.len(),
                up.len()
            )));
        }
        for v in 0..n {
            if tree.parent(v).is_some() != up[v].is_some() {
                return Err(EngineError::Instance(format!(
                    "vertex {v}: edge datum present iff a parent exists"
                )));
            }
        }
        Ok(Instance { tree, nodes, up })
    }

    /// Builds an instance from per-vertex closures.
    pub fn build<F, G>(tree: Tree, mut node: F, mut edge: G) -> Self
    where
        F: FnMut(VertexId) -> A::Node,
        G: FnMut(VertexId) -> A::Edge,
    {
        let n = tree.len();
        let nodes = (0..n).map(&mut node).collect();
        let up = (0..n).map(|v| tree.parent(v).map(|_| edge(v))).collect();
        Instance { tree, nodes, up }
    }

    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tree.is_empty()
    }
}
