//! Rooted-tree substrate: ordered trees, degree-budgeted payloads,
//! preorder decompositions, dependency trees and Big-Small trees.

pub mod bigsmall;
pub mod decompose;
pub mod error;
pub mod io;
pub mod preorder;
pub mod tree;
pub mod weight;

pub use bigsmall::{
    leaf_fraction, leaf_fraction_bound, low_degree_components, BigSmallTree, BsKind, BsNode,
    LowComponent,
};
pub use decompose::{
    decompose, dependency_tree, group_components, pack_greedy, DepNode, DependencyTree,
    PreorderDecomposition,
};
pub use error::TreeError;
pub use io::LabeledTree;
pub use preorder::{order_from_ranks, preorder_number};
pub use tree::{Tree, VertexId};
pub use weight::{
    id_bits, int_bits, log_factor, payload_budget, DegreeWeightedTree, WeightVector, DEFAULT_C_W,
};
