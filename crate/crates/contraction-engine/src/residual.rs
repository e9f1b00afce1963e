use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use tree_core::{id_bits, VertexId};

use crate::algebra::UnaryAlgebra;
use crate::error::EngineError;

/// One node of a stored residual tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RNode<N, E> {
    /// A contracted vertex still needed to describe the dependence on the
    /// unknown children. The root carries no edge; every other known node
    /// carries the edge to its residual parent.
    Known {
        node: N,
        edge: Option<E>,
        children: Vec<u32>,
    },
    /// An external child, identified by the slot it occupies. Its edge is
    /// stored with the child.
    Stub { slot: VertexId },
}

/// Payload of a live vertex: its own accumulator at index 0 plus whatever
/// part of the absorbed subtree still hangs between it and the live children.
/// Nodes are kept in preorder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residual<N, E> {
    pub nodes: Vec<RNode<N, E>>,
    pub bits: u64,
}

impl<N, E> Residual<N, E> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root_node(&self) -> &N {
        match &self.nodes[0] {
            RNode::Known { node, .. } => node,
            RNode::Stub { .. } => unreachable!("residual root is always known"),
        }
    }

    fn root_children(&self) -> &[u32] {
        match &self.nodes[0] {
            RNode::Known { children, .. } => children,
            RNode::Stub { .. } => unreachable!("residual root is always known"),
        }
    }

    /// Slots of the stubs, in preorder.
    pub fn stub_slots(&self) -> Vec<VertexId> {
        self.nodes
            .iter()
            .filter_map(|x| match x {
                RNode::Stub { slot } => Some(*slot),
                RNode::Known { .. } => None,
            })
            .collect()
    }

    pub fn stub_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|x| matches!(x, RNode::Stub { .. }))
            .count()
    }

    /// Root plus stubs directly below it, nothing else.
    pub fn is_flat(&self) -> bool {
        self.root_children().len() + 1 == self.nodes.len()
    }
}

fn ceil_log2(x: usize) -> u64 {
    if x <= 1 {
        0
    } else {
        u64::from(usize::BITS - (x - 1).leading_zeros())
    }
}

/// A child of a component member as seen at contraction time.
#[derive(Debug, Clone)]
pub struct ChildView<'x, E> {
    pub id: VertexId,
    pub slot: VertexId,
    pub edge: &'x E,
}

/// A component member: its payload and its live children, in order.
#[derive(Debug, Clone)]
pub struct MemberView<'x, N, E> {
    pub id: VertexId,
    pub payload: &'x Residual<N, E>,
    pub children: Vec<ChildView<'x, E>>,
}

/// Result of contracting a component into its root.
#[derive(Debug, Clone)]
pub struct Contracted<N, E> {
    pub residual: Residual<N, E>,
    /// External children with their (possibly recomposed) edges, in stub order.
    pub external: Vec<(VertexId, E)>,
}

struct Work<N, E> {
    node: Option<N>,
    stub: Option<(VertexId, VertexId)>,
    edge: Option<E>,
    parent: Option<usize>,
    children: Vec<usize>,
}

/// The unary algebra lifted to components and leaf sets: a component becomes
/// one vertex whose payload is the residual left by a local compress/rake
/// pass, and `k` sibling leaves become one leaf through `k - 1` merges.
pub struct Lifted<'a, A: UnaryAlgebra> {
    pub alg: &'a A,
    /// Original problem size, for id widths.
    pub n: usize,
}

pub type Res<A> = Residual<<A as UnaryAlgebra>::Node, <A as UnaryAlgebra>::Edge>;

pub fn lift_unary<A: UnaryAlgebra>(alg: &A, n: usize) -> Lifted<'_, A> {
    Lifted { alg, n }
}

impl<'a, A: UnaryAlgebra> Lifted<'a, A> {
    pub fn initial(&self, node: A::Node, children: &[VertexId]) -> Res<A> {
        let mut nodes = Vec::with_capacity(children.len() + 1);
        nodes.push(RNode::Known {
            node,
            edge: None,
            children: (1..=children.len() as u32).collect(),
        });
        nodes.extend(children.iter().map(|&c| RNode::Stub { slot: c }));
        self.finish(nodes)
    }

    pub fn single(&self, node: A::Node) -> Res<A> {
        self.initial(node, &[])
    }

    fn finish(&self, nodes: Vec<RNode<A::Node, A::Edge>>) -> Res<A> {
        let bits = self.bits_of(&nodes);
        Residual { nodes, bits }
    }

    pub fn bits_of(&self, nodes: &[RNode<A::Node, A::Edge>]) -> u64 {
        let ptr = ceil_log2(nodes.len());
        nodes
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let link = if i == 0 { 0 } else { ptr };
                2 + link
                    + match x {
                        RNode::Known { node, edge, .. } => {
                            self.alg.node_bits(node)
                                + edge.as_ref().map_or(0, |e| self.alg.edge_bits(e))
                        }
                        RNode::Stub { .. } => id_bits(self.n),
                    }
            })
            .sum()
    }

    pub fn edge_bits(&self, e: &A::Edge) -> u64 {
        self.alg.edge_bits(e)
    }

    /// Connected contraction. `members[0]` is the component root; the rest
    /// follow in preorder. Stubs whose slot no longer has a live child were
    /// absorbed by a sibling merge and are dropped.
    pub fn connected(
        &self,
        members: &[MemberView<'_, A::Node, A::Edge>],
    ) -> Result<Contracted<A::Node, A::Edge>, EngineError> {
        let alg = self.alg;
        let index: HashMap<VertexId, usize> =
            members.iter().enumerate().map(|(i, m)| (m.id, i)).collect();
        let slots: Vec<HashMap<VertexId, &ChildView<'_, A::Edge>>> = members
            .iter()
            .map(|m| m.children.iter().map(|c| (c.slot, c)).collect())
            .collect();

        let mut w: Vec<Work<A::Node, A::Edge>> = Vec::new();
        let mut stack: Vec<(usize, usize, Option<usize>, Option<A::Edge>)> =
            vec![(0, 0, None, None)];
        let mut seen = vec![false; members.len()];
        while let Some((m, i, parent, given)) = stack.pop() {
            let payload = members[m].payload;
            match &payload.nodes[i] {
                RNode::Known {
                    node,
                    edge,
                    children,
                } => {
                    if i == 0 {
                        if seen[m] {
                            return Err(EngineError::LogIntegrity(format!(
                                "member {} glued twice",
                                members[m].id
                            )));
                        }
                        seen[m] = true;
                    }
                    let edge = if i == 0 { given } else { edge.clone() };
                    let at = w.len();
                    w.push(Work {
                        node: Some(node.clone()),
                        stub: None,
                        edge,
                        parent,
                        children: Vec::new(),
                    });
                    if let Some(p) = parent {
                        w[p].children.push(at);
                    }
                    for &c in children.iter().rev() {
                        stack.push((m, c as usize, Some(at), None));
                    }
                }
                RNode::Stub { slot } => {
                    let Some(c) = slots[m].get(slot) else {
                        continue;
                    };
                    if let Some(&m2) = index.get(&c.id) {
                        stack.push((m2, 0, parent, Some(c.edge.clone())));
                    } else {
                        let at = w.len();
                        w.push(Work {
                            node: None,
                            stub: Some((c.id, c.slot)),
                            edge: Some(c.edge.clone()),
                            parent,
                            children: Vec::new(),
                        });
                        if let Some(p) = parent {
                            w[p].children.push(at);
                        }
                    }
                }
            }
        }
        if let Some(m) = seen.iter().position(|s| !s) {
            return Err(EngineError::LogIntegrity(format!(
                "member {} is not reachable from the component root",
                members[m].id
            )));
        }

        // Work nodes were created in preorder, so a reverse sweep sees every
        // node after all of its descendants.
        for x in (1..w.len()).rev() {
            if w[x].node.is_none() {
                continue;
            }
            let p = w[x].parent.expect("non-root work node has a parent");
            match w[x].children.len() {
                0 => {
                    let value = alg.resolve(w[x].node.as_ref().unwrap(), &[]);
                    let edge = w[x].edge.take().expect("non-root edge");
                    let pos = w[p].children.iter().position(|&c| c == x).unwrap();
                    w[p].children.remove(pos);
                    alg.rake(w[p].node.as_mut().unwrap(), pos, &edge, &value);
                    w[x].node = None;
                }
                1 => {
                    let c = w[x].children[0];
                    let fused = alg.compress(
                        w[x].edge.as_ref().unwrap(),
                        w[x].node.as_ref().unwrap(),
                        w[c].edge.as_ref().unwrap(),
                    );
                    if let Some(e) = fused {
                        w[c].edge = Some(e);
                        w[c].parent = Some(p);
                        let pos = w[p].children.iter().position(|&y| y == x).unwrap();
                        w[p].children[pos] = c;
                        w[x].node = None;
                        w[x].children.clear();
                    }
                }
                _ => {}
            }
        }

        let mut nodes: Vec<RNode<A::Node, A::Edge>> = Vec::new();
        let mut external = Vec::new();
        let mut stack: Vec<(usize, Option<usize>)> = vec![(0, None)];
        while let Some((x, parent)) = stack.pop() {
            let at = nodes.len() as u32;
            if let Some(p) = parent {
                if let RNode::Known { children, .. } = &mut nodes[p] {
                    children.push(at);
                }
            }
            if let Some((id, slot)) = w[x].stub {
                external.push((id, w[x].edge.take().expect("stub edge")));
                nodes.push(RNode::Stub { slot });
            } else {
                nodes.push(RNode::Known {
                    node: w[x].node.take().expect("live known node"),
                    edge: if x == 0 { None } else { w[x].edge.take() },
                    children: Vec::new(),
                });
                for &c in w[x].children.iter().rev() {
                    stack.push((c, Some(at as usize)));
                }
            }
        }
        Ok(Contracted {
            residual: self.finish(nodes),
            external,
        })
    }

    /// Rakes finished leaves into a flat residual without touching the rest
    /// of it, and drops stubs listed in `dead`.
    pub fn fold_flat(
        &self,
        root: &Res<A>,
        leaves: &[(VertexId, &A::Node, &A::Edge)],
        dead: &[VertexId],
    ) -> Result<Res<A>, EngineError> {
        if !root.is_flat() {
            return Err(EngineError::LogIntegrity(
                "flat fold on a residual with inner nodes".into(),
            ));
        }
        let mut node = root.root_node().clone();
        let mut remaining: Vec<VertexId> = root
            .stub_slots()
            .into_iter()
            .filter(|s| !dead.contains(s))
            .collect();
        let mut order: Vec<(usize, usize)> = Vec::with_capacity(leaves.len());
        for (i, (slot, _, _)) in leaves.iter().enumerate() {
            let pos = remaining.iter().position(|s| s == slot).ok_or_else(|| {
                EngineError::LogIntegrity(format!("no stub for slot {slot} in fold"))
            })?;
            order.push((pos, i));
        }
        order.sort_unstable();
        for (_, i) in order {
            let (slot, leaf, edge) = leaves[i];
            let pos = remaining.iter().position(|&s| s == slot).unwrap();
            remaining.remove(pos);
            let value = self.alg.resolve(leaf, &[]);
            self.alg.rake(&mut node, pos, edge, &value);
        }
        Ok(self.initial(node, &remaining))
    }

    /// Sibling contraction: one leaf standing for all of `leaves`.
    pub fn merge(
        &self,
        leaves: &[(&A::Node, &A::Edge)],
    ) -> Result<(A::Node, A::Edge), EngineError> {
        let (first, rest) = leaves.split_first().expect("at least one leaf");
        let mut acc = (first.0.clone(), first.1.clone());
        for &(n, e) in rest {
            acc = self
                .alg
                .merge_leaves((&acc.0, &acc.1), (n, e))
                .ok_or(EngineError::MergeUnsupported(self.alg.name()))?;
        }
        Ok(acc)
    }

    /// Evaluates a residual bottom-up. `child` maps a stub slot to the
    /// child's edge and value; `None` marks a stub absorbed by a merge.
    pub fn resolve<'v, F>(&self, r: &Res<A>, child: F) -> A::Value
    where
        F: Fn(VertexId) -> Option<(&'v A::Edge, &'v A::Value)>,
        A::Edge: 'v,
        A::Value: 'v,
    {
        let mut values: Vec<Option<A::Value>> = vec![None; r.nodes.len()];
        for i in (0..r.nodes.len()).rev() {
            if let RNode::Known { node, children, .. } = &r.nodes[i] {
                let mut parts: Vec<(&A::Edge, &A::Value)> = Vec::with_capacity(children.len());
                for &c in children {
                    match &r.nodes[c as usize] {
                        RNode::Stub { slot } => {
                            if let Some(p) = child(*slot) {
                                parts.push(p);
                            }
                        }
                        RNode::Known { edge, .. } => parts.push((
                            edge.as_ref().expect("inner node edge"),
                            values[c as usize].as_ref().expect("child resolved first"),
                        )),
                    }
                }
                let v = self.alg.resolve(node, &parts);
                values[i] = Some(v);
            }
        }
        values[0].take().expect("root resolved")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras::{SumNode, SumParent};

    #[test]
    fn single_member_is_identity() {
        let l = lift_unary(&SumParent, 4);
        let p = l.initial(SumNode::leaf(3), &[1, 2]);
        let edges = [5i64, 6];
        let m = MemberView {
            id: 0,
            payload: &p,
            children: vec![
                ChildView {
                    id: 1,
                    slot: 1,
                    edge: &edges[0],
                },
                ChildView {
                    id: 2,
                    slot: 2,
                    edge: &edges[1],
                },
            ],
        };
        let c = l.connected(&[m]).unwrap();
        assert_eq!(c.residual, p);
        assert_eq!(c.external, vec![(1, 5), (2, 6)]);
    }

    #[test]
    fn chain_of_five_leaves_one_stub() {
        let l = lift_unary(&SumParent, 8);
        let payloads: Vec<_> = (0..5)
            .map(|v| l.initial(SumNode::leaf(100), &[v + 1]))
            .collect();
        let edges: Vec<i64> = (1..=5).collect();
        let members: Vec<_> = (0..5)
            .map(|v| MemberView {
                id: v,
                payload: &payloads[v],
                children: vec![ChildView {
                    id: v + 1,
                    slot: v + 1,
                    edge: &edges[v],
                }],
            })
            .collect();
        let c = l.connected(&members).unwrap();
        assert_eq!(c.residual.len(), 2);
        assert_eq!(c.residual.stub_slots(), vec![5]);
        assert_eq!(c.external.len(), 1);
        // value(root) = 10 + sum of the five edge offsets
        let (x, e) = &c.external[0];
        assert_eq!(*x, 5);
        let ten = 10i64;
        let v = l.resolve(&c.residual, |s| (s == 5).then_some((e, &ten)));
        assert_eq!(v, 10 + 15);
    }

    #[test]
    fn four_leaf_merge_is_the_sum() {
        let l = lift_unary(&SumParent, 8);
        let nodes: Vec<_> = (1..=4).map(SumNode::leaf).collect();
        let zero = 0i64;
        let leaves: Vec<_> = nodes.iter().map(|n| (n, &zero)).collect();
        let (n, e) = l.merge(&leaves).unwrap();
        assert_eq!(SumParent.resolve(&n, &[]) + e, 10);
    }

    #[test]
    fn fold_drops_dead_stubs() {
        let l = lift_unary(&SumParent, 8);
        let root = l.initial(SumNode::leaf(0), &[1, 2, 3]);
        let leaf = SumNode::leaf(4);
        let f = l.fold_flat(&root, &[(3, &leaf, &1)], &[2]).unwrap();
        assert_eq!(f.stub_slots(), vec![1]);
        assert_eq!(f.root_node().acc, 5);
    }
}
