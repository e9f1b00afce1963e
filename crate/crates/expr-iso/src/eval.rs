use ampc_sim::{Metrics, SimConfig};
use contraction_engine::{bounded_tree_contract, ContractionLog, Instance, RunStats, UnaryAlgebra};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{ExprError, ExprFault};
use crate::lexer::Op;
use crate::simplify::{simplify_expression, ExprTree, OpNode};

pub type Q = BigRational;
pub type Val = Result<Q, ExprFault>;

pub const MAX_EXPONENT: u32 = 64;

/// An operator with the operands absorbed so far; a number is an operator
/// with nothing left to wait for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ExprNode {
    Num(Q),
    Apply {
        op: Op,
        pos: usize,
        known: [Option<Val>; 2],
    },
}

/// `x -> (a x + b) / (c x + d)`, guarded by the inputs that would divide by
/// zero somewhere inside. `forbidden` is checked in order, then `always`.
/// `mask` is a fault from an operand evaluated before `x`; it wins even over
/// a fault carried in by `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mobius {
    pub a: Q,
    pub b: Q,
    pub c: Q,
    pub d: Q,
    pub forbidden: Vec<(Q, ExprFault)>,
    pub always: Option<ExprFault>,
    pub mask: Option<ExprFault>,
}

impl Mobius {
    pub fn identity() -> Self {
        Self::affine(Q::one(), Q::zero())
    }

    fn affine(a: Q, b: Q) -> Self {
        Mobius {
            a,
            b,
            c: Q::zero(),
            d: Q::one(),
            forbidden: Vec::new(),
            always: None,
            mask: None,
        }
    }

    fn failing(f: ExprFault, masks: bool) -> Self {
        Mobius {
            always: Some(f),
            mask: masks.then_some(f),
            ..Self::identity()
        }
    }

    pub fn apply(&self, x: &Val) -> Val {
        let x = x.as_ref().map_err(|f| self.mask.unwrap_or(*f))?;
        if let Some((_, f)) = self.forbidden.iter().find(|(p, _)| p == x) {
            return Err(*f);
        }
        if let Some(f) = self.always {
            return Err(f);
        }
        let den = &self.c * x + &self.d;
        assert!(!den.is_zero(), "pole outside the forbidden set");
        Ok((&self.a * x + &self.b) / den)
    }

    /// `self` after `inner`.
    pub fn after(&self, inner: &Mobius) -> Mobius {
        if let Some(f) = self.mask {
            return Self::failing(f, true);
        }
        if inner.always.is_some() {
            return inner.clone();
        }
        let mut forbidden = inner.forbidden.clone();
        let mut always = None;
        for (y, f) in &self.forbidden {
            // solve inner(x) = y
            let lhs = &inner.a - &inner.c * y;
            let rhs = &inner.d * y - &inner.b;
            if !lhs.is_zero() {
                forbidden.push((rhs / lhs, *f));
            } else if rhs.is_zero() {
                always = Some(*f);
                break;
            }
        }
        if always.is_none() {
            always = self.always;
        }
        let (a, b, c, d) = (
            &self.a * &inner.a + &self.b * &inner.c,
            &self.a * &inner.b + &self.b * &inner.d,
            &self.c * &inner.a + &self.d * &inner.c,
            &self.c * &inner.b + &self.d * &inner.d,
        );
        Mobius {
            a,
            b,
            c,
            d,
            forbidden,
            always,
            mask: inner.mask,
        }
    }

    fn bits(&self) -> u64 {
        [&self.a, &self.b, &self.c, &self.d]
            .into_iter()
            .chain(self.forbidden.iter().map(|(q, _)| q))
            .map(q_bits)
            .sum::<u64>()
            + 64 * (self.forbidden.len() as u64 + 1)
    }
}

pub fn q_bits(q: &Q) -> u64 {
    q.numer().bits() + q.denom().bits() + 2
}

/// Applies one operator to two evaluated operands, left fault first.
pub fn apply_op(op: Op, pos: usize, l: &Val, r: &Val) -> Val {
    let l = l.as_ref().map_err(|f| *f)?;
    let r = r.as_ref().map_err(|f| *f)?;
    Ok(match op {
        Op::Add => l + r,
        Op::Sub => l - r,
        Op::Mul => l * r,
        Op::Div => {
            if r.is_zero() {
                return Err(ExprFault::DivisionByZero(pos));
            }
            l / r
        }
        Op::Pow => {
            let k = (r.is_integer() && !r.is_negative())
                .then(|| r.to_integer().to_u32())
                .flatten()
                .filter(|&k| k <= MAX_EXPONENT)
                .ok_or(ExprFault::BadExponent(pos))?;
            Q::new(l.numer().pow(k), l.denom().pow(k))
        }
    })
}

/// Exact evaluation over binary operator trees. Fixing one operand of
/// `+ - * /` leaves a Möbius map of the other, and Möbius maps compose, so
/// chains contract. `**` with an open operand is not such a map and stays.
#[derive(Debug, Clone, Copy, Default)]
pub struct Arith;

impl Arith {
    fn as_map(&self, node: &ExprNode) -> Option<Mobius> {
        let ExprNode::Apply { op, pos, known } = node else {
            return None;
        };
        let (slot, k) = match known {
            [Some(k), None] => (0, k),
            [None, Some(k)] => (1, k),
            _ => return None,
        };
        let k = match k {
            Ok(k) => k.clone(),
            // a failed left operand is evaluated first and hides the right one
            Err(f) => return Some(Mobius::failing(*f, slot == 0)),
        };
        let one = Q::one;
        let zero = Q::zero;
        Some(match (op, slot) {
            (Op::Add, _) => Mobius::affine(one(), k),
            (Op::Sub, 0) => Mobius::affine(-one(), k),
            (Op::Sub, _) => Mobius::affine(one(), -k),
            (Op::Mul, _) => Mobius::affine(k, zero()),
            (Op::Div, 0) => Mobius {
                a: zero(),
                b: k,
                c: one(),
                d: zero(),
                forbidden: vec![(zero(), ExprFault::DivisionByZero(*pos))],
                always: None,
                mask: None,
            },
            (Op::Div, _) if k.is_zero() => Mobius::failing(ExprFault::DivisionByZero(*pos), false),
            (Op::Div, _) => Mobius {
                d: k,
                ..Mobius::identity()
            },
            (Op::Pow, _) => return None,
        })
    }
}

fn val_bits(v: &Option<Val>) -> u64 {
    match v {
        Some(Ok(q)) => q_bits(q),
        _ => 2,
    }
}

impl UnaryAlgebra for Arith {
    type Node = ExprNode;
    type Edge = Mobius;
    type Value = Val;

    fn resolve(&self, node: &ExprNode, children: &[(&Mobius, &Val)]) -> Val {
        match node {
            ExprNode::Num(q) => Ok(q.clone()),
            ExprNode::Apply { op, pos, known } => {
                let mut open = children.iter().map(|(e, v)| e.apply(v));
                let mut side = |k: &Option<Val>| match k {
                    Some(v) => v.clone(),
                    None => open.next().expect("operand missing at resolve"),
                };
                let l = side(&known[0]);
                let r = side(&known[1]);
                apply_op(*op, *pos, &l, &r)
            }
        }
    }

    fn rake(&self, parent: &mut ExprNode, index: usize, edge: &Mobius, leaf: &Val) {
        let ExprNode::Apply { known, .. } = parent else {
            panic!("number with a child")
        };
        let slot = (0..2)
            .filter(|&s| known[s].is_none())
            .nth(index)
            .expect("rake index out of range");
        known[slot] = Some(edge.apply(leaf));
    }

    fn compress(&self, upper: &Mobius, mid: &ExprNode, lower: &Mobius) -> Option<Mobius> {
        let m = self.as_map(mid)?;
        Some(upper.after(&m.after(lower)))
    }

    fn merge_leaves(
        &self,
        _: (&ExprNode, &Mobius),
        _: (&ExprNode, &Mobius),
    ) -> Option<(ExprNode, Mobius)> {
        None
    }

    fn node_bits(&self, node: &ExprNode) -> u64 {
        match node {
            ExprNode::Num(q) => q_bits(q),
            ExprNode::Apply { known, .. } => 8 + val_bits(&known[0]) + val_bits(&known[1]),
        }
    }

    fn edge_bits(&self, e: &Mobius) -> u64 {
        e.bits()
    }

    fn payload_constant(&self) -> Option<u64> {
        None
    }

    fn name(&self) -> &'static str {
        "arith"
    }
}

pub fn arith_instance(t: &ExprTree) -> Instance<Arith> {
    Instance::build(
        t.tree.clone(),
        |v| match &t.nodes[v] {
            OpNode::Num(n) => ExprNode::Num(Q::from_integer(n.clone())),
            OpNode::Op { op, pos } => ExprNode::Apply {
                op: *op,
                pos: *pos,
                known: [None, None],
            },
        },
        |_| Mobius::identity(),
    )
}

#[derive(Debug, Clone)]
pub struct Evaluation {
    pub value: Q,
    pub tree: ExprTree,
    /// Rounds of the string pipeline: three local steps plus matching levels.
    pub parse_rounds: u64,
    pub metrics: Metrics,
    pub stats: RunStats,
    pub log: ContractionLog<ExprNode, Mobius>,
}

impl Evaluation {
    pub fn total_rounds(&self) -> u64 {
        self.parse_rounds + self.metrics.rounds
    }
}

/// Parses `s` into an operator tree and evaluates it exactly by bounded
/// contraction. Faults name the byte offset of the failing operator.
pub fn evaluate_expression(s: &str, cfg: &SimConfig) -> Result<Evaluation, ExprError> {
    let tree = simplify_expression(s, cfg)?;
    let inner = SimConfig {
        n: tree.tree.len(),
        ..cfg.clone()
    };
    let out = bounded_tree_contract(&Arith, &arith_instance(&tree), &inner)?;
    let value = out.answer?;
    Ok(Evaluation {
        value,
        parse_rounds: 3 + tree.match_levels as u64,
        tree,
        metrics: out.metrics,
        stats: out.stats,
        log: out.log,
    })
}

/// Formats a rational as `p` or `p/q`.
pub fn show(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(s: &str) -> Result<Q, ExprError> {
        evaluate_expression(s, &SimConfig::new(64, 0.5).strict(true)).map(|e| e.value)
    }

    #[test]
    fn worked_example() {
        assert_eq!(eval("2+5-(3+2\u{d7}6)-9").unwrap(), int(-17));
        assert_eq!(eval("7").unwrap(), int(7));
    }

    #[test]
    fn rationals_and_powers() {
        assert_eq!(eval("1/3+1/6").unwrap(), Q::new(1.into(), 2.into()));
        assert_eq!(eval("2**3**2").unwrap(), int(512));
        assert_eq!(eval("(1/2)**3").unwrap(), Q::new(1.into(), 8.into()));
    }

    #[test]
    fn faults() {
        assert!(matches!(
            eval("1/(2-2)"),
            Err(ExprError::Arithmetic(ExprFault::DivisionByZero(1)))
        ));
        assert!(matches!(
            eval("2**(1/2)"),
            Err(ExprError::Arithmetic(ExprFault::BadExponent(1)))
        ));
        assert!(matches!(
            eval("2**65"),
            Err(ExprError::Arithmetic(ExprFault::BadExponent(1)))
        ));
    }

    #[test]
    fn mobius_composition_tracks_poles() {
        // x -> 1/x after x -> x - 3: forbidden at x = 3
        let inner = Mobius::affine(int(1), int(-3));
        let outer = Mobius {
            a: int(0),
            b: int(1),
            c: int(1),
            d: int(0),
            forbidden: vec![(int(0), ExprFault::DivisionByZero(9))],
            always: None,
            mask: None,
        };
        let m = outer.after(&inner);
        assert_eq!(m.apply(&Ok(int(3))), Err(ExprFault::DivisionByZero(9)));
        assert_eq!(m.apply(&Ok(int(4))), Ok(int(1)));
        // constant inner hitting the pole fails for every input
        let zero = Mobius::affine(int(0), int(0));
        assert_eq!(
            outer.after(&zero).apply(&Ok(int(5))),
            Err(ExprFault::DivisionByZero(9))
        );
    }
}
