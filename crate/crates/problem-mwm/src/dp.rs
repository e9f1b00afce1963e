use serde::{Deserialize, Serialize};
use tree_core::VertexId;

use crate::ext::{Ext, Fin, NegInf};

/// Running constants of a vertex: `a` is the best gain from matching into an
/// absorbed child, `b` the summed contribution of absorbed children.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MwmVertexData {
    pub a: i64,
    pub b: i64,
}

/// Best matchings along a contracted path from an upper vertex `g` to a
/// lower vertex `c`: `w1` has both ends matched along the path, `w2` only
/// `g`, `w3` only `c`, `w4` neither.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MwmEdgeTuple {
    pub w1: Ext,
    pub w2: Ext,
    pub w3: Ext,
    pub w4: Ext,
}

impl MwmEdgeTuple {
    /// A real edge of weight `w`.
    pub fn fresh(w: i64) -> Self {
        MwmEdgeTuple {
            w1: Fin(w),
            w2: NegInf,
            w3: NegInf,
            w4: Fin(0),
        }
    }

    pub fn bits(&self) -> u64 {
        self.w1.bits() + self.w2.bits() + self.w3.bits() + self.w4.bits()
    }
}

/// `c`: best matching of the subtree; `c_prime`: best with the vertex unmatched.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct MwmValue {
    pub c: i64,
    pub c_prime: i64,
}

impl MwmValue {
    pub fn new(c: i64, c_prime: i64) -> Self {
        MwmValue { c, c_prime }
    }
}

/// What the parent gains from a child across `e` when the parent does not
/// match along it.
pub fn keep(e: &MwmEdgeTuple, u: MwmValue) -> Ext {
    (e.w3 + u.c_prime).max(e.w4 + u.c)
}

/// Extra value over [`keep`] when the parent matches along `e`.
pub fn gain(e: &MwmEdgeTuple, u: MwmValue) -> Ext {
    let matched = (e.w1 + u.c_prime).max(e.w2 + u.c);
    match (matched, keep(e, u)) {
        (Fin(m), Fin(k)) => Fin(m - k),
        _ => NegInf,
    }
}

fn fin(x: Ext, what: &str) -> i64 {
    x.finite()
        .unwrap_or_else(|| panic!("{what} is unbounded below; no edge tuple allows it"))
}

/// Resolves a vertex from its remaining children. The vertex matches into
/// the child with the largest gain when that gain beats both `a` and 0;
/// ties go to leaving it unmatched, then to the smallest id.
pub fn dp_combine(
    v: &MwmVertexData,
    children: &[(VertexId, MwmValue, MwmEdgeTuple)],
) -> (MwmValue, Option<VertexId>) {
    let mut base = v.b;
    let mut best: (i64, Option<VertexId>) = (v.a.max(0), None);
    for &(id, u, e) in children {
        base += fin(keep(&e, u), "child contribution");
        if let Fin(g) = gain(&e, u) {
            let better = g > best.0 || (g == best.0 && best.1.is_some_and(|b| id < b));
            if better {
                best = (g, Some(id));
            }
        }
    }
    (MwmValue::new(base + best.0, base), best.1)
}

/// Absorbs finished leaves into their parent's constants.
pub fn trim_leaves(p: &mut MwmVertexData, leaves: &[(MwmValue, MwmEdgeTuple)]) {
    for (l, e) in leaves {
        p.b += fin(keep(e, *l), "leaf contribution");
        if let Fin(g) = gain(e, *l) {
            p.a = p.a.max(g);
        }
    }
}

/// Fuses `upper = (g, p)` and `lower = (p, c)` into one edge `(g, c)`, where
/// `mid` is `p` evaluated without its child `c`.
pub fn contract_chain(upper: &MwmEdgeTuple, lower: &MwmEdgeTuple, mid: MwmValue) -> MwmEdgeTuple {
    let (cp, cpp) = (mid.c, mid.c_prime);
    let (u, l) = (upper, lower);
    MwmEdgeTuple {
        w1: (l.w1 + u.w2 + cpp)
            .max(l.w3 + u.w1 + cpp)
            .max(l.w3 + u.w2 + cp),
        w2: (l.w2 + u.w2 + cpp)
            .max(l.w4 + u.w1 + cpp)
            .max(l.w4 + u.w2 + cp),
        w3: (l.w1 + u.w4 + cpp)
            .max(l.w3 + u.w3 + cpp)
            .max(l.w3 + u.w4 + cp),
        w4: (l.w2 + u.w4 + cpp)
            .max(l.w4 + u.w3 + cpp)
            .max(l.w4 + u.w4 + cp),
    }
}

/// Value of `p` with all of its remaining children cut off.
pub fn cut_off(p: &MwmVertexData) -> MwmValue {
    MwmValue::new(p.b + p.a.max(0), p.b)
}
