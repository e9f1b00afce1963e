use tree_core::{Tree, VertexId};

use crate::algebra::{Instance, UnaryAlgebra};

/// Result of the sequential compress/rake reference.
#[derive(Debug, Clone)]
pub struct ReferenceRun<V> {
    pub answer: V,
    pub phases: usize,
}

/// Sequential 2-tree-contraction: each phase rakes every leaf into its
/// parent, then splices out an independent set of unary vertices. Serves as
/// a semantic oracle for contracting functions.
pub fn two_contraction_reference<A: UnaryAlgebra>(
    alg: &A,
    inst: &Instance<A>,
) -> ReferenceRun<A::Value> {
    let t: &Tree = &inst.tree;
    let n = t.len();
    let mut node: Vec<A::Node> = inst.nodes.clone();
    let mut edge: Vec<Option<A::Edge>> = inst.up.clone();
    let mut parent: Vec<Option<VertexId>> = t.parents().to_vec();
    let mut children: Vec<Vec<VertexId>> = (0..n).map(|v| t.children(v).to_vec()).collect();
    let root = t.root();
    let mut phases = 0;

    let preorder = |children: &Vec<Vec<VertexId>>| {
        let mut out = Vec::new();
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(children[v].iter().rev());
        }
        out
    };

    while !children[root].is_empty() {
        phases += 1;
        let order = preorder(&children);
        for &p in &order {
            let mut i = 0;
            while i < children[p].len() {
                let c = children[p][i];
                if children[c].is_empty() {
                    let value = alg.resolve(&node[c], &[]);
                    let e = edge[c].take().expect("child edge");
                    children[p].remove(i);
                    alg.rake(&mut node[p], i, &e, &value);
                } else {
                    i += 1;
                }
            }
        }
        let order = preorder(&children);
        let mut picked = vec![false; n];
        let mut blocked = vec![false; n];
        for &m in &order {
            let Some(p) = parent[m] else { continue };
            if children[m].len() != 1 || picked[p] || blocked[m] {
                continue;
            }
            let c = children[m][0];
            let Some(e) = alg.compress(
                edge[m].as_ref().unwrap(),
                &node[m],
                edge[c].as_ref().unwrap(),
            ) else {
                continue;
            };
            picked[m] = true;
            blocked[c] = true;
            edge[c] = Some(e);
            parent[c] = Some(p);
            let pos = children[p].iter().position(|&x| x == m).unwrap();
            children[p][pos] = c;
            children[m].clear();
        }
    }
    ReferenceRun {
        answer: alg.resolve(&node[root], &[]),
        phases,
    }
}

/// Direct bottom-up evaluation of `P(v)` for every vertex.
pub fn sequential_values<A: UnaryAlgebra>(alg: &A, inst: &Instance<A>) -> Vec<A::Value> {
    let t = &inst.tree;
    let mut out: Vec<Option<A::Value>> = vec![None; t.len()];
    for v in t.postorder() {
        let kids: Vec<(&A::Edge, &A::Value)> = t
            .children(v)
            .iter()
            .map(|&c| (inst.up[c].as_ref().unwrap(), out[c].as_ref().unwrap()))
            .collect();
        let value = alg.resolve(&inst.nodes[v], &kids);
        out[v] = Some(value);
    }
    out.into_iter().map(Option::unwrap).collect()
}
