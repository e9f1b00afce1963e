use std::fmt::Write as _;

use ampc_sim::SimConfig;
use num_bigint::BigInt;
use tree_core::{Tree, VertexId};

use crate::error::ExprError;
use crate::lexer::{check_adjacency, tokenize, Op, Tok, Token};
use crate::parens::match_parens;

/// One symbol of the padded string. Numbers and operators point back into
/// the token list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sym {
    Open,
    Close,
    Num(usize),
    Op(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OpNode {
    Num(BigInt),
    Op { op: Op, pos: usize },
}

/// Binary operator tree; children are `[left, right]`.
#[derive(Debug, Clone)]
pub struct ExprTree {
    pub tree: Tree,
    pub nodes: Vec<OpNode>,
    /// The string after paren insertion, before redundant pairs are removed.
    pub padded: String,
    /// The simple expression the tree was read from.
    pub simple: String,
    /// Machine levels spent matching parentheses.
    pub match_levels: usize,
}

impl ExprTree {
    /// Prefix form such as `(+ 1 2)`.
    pub fn sexpr(&self) -> String {
        let mut out = String::new();
        let mut stack = vec![(self.tree.root(), false)];
        while let Some((v, closing)) = stack.pop() {
            if closing {
                out.push(')');
                continue;
            }
            if !out.is_empty() && !out.ends_with('(') {
                out.push(' ');
            }
            match &self.nodes[v] {
                OpNode::Num(n) => write!(out, "{n}").unwrap(),
                OpNode::Op { op, .. } => {
                    write!(out, "({}", op.symbol()).unwrap();
                    stack.push((v, true));
                    for &c in self.tree.children(v).iter().rev() {
                        stack.push((c, false));
                    }
                }
            }
        }
        out
    }
}

/// Step 1: `+ -` gain `))` on the left and `((` on the right, `* /` one of
/// each, every parenthesis two more of its own kind, and the whole string is
/// wrapped in `((...))`. `**` binds tightest and is left bare.
pub fn pad(tokens: &[Token]) -> Vec<Sym> {
    let mut out = vec![Sym::Open, Sym::Open];
    for (i, t) in tokens.iter().enumerate() {
        match &t.tok {
            Tok::Num(_) => out.push(Sym::Num(i)),
            Tok::Open => out.extend([Sym::Open; 3]),
            Tok::Close => out.extend([Sym::Close; 3]),
            Tok::Op(op) => {
                let k = match op {
                    Op::Add | Op::Sub => 2,
                    Op::Mul | Op::Div => 1,
                    Op::Pow => 0,
                };
                out.extend(std::iter::repeat_n(Sym::Close, k));
                out.push(Sym::Op(i));
                out.extend(std::iter::repeat_n(Sym::Open, k));
            }
        }
    }
    out.extend([Sym::Close, Sym::Close]);
    out
}

fn render(syms: &[Sym], tokens: &[Token]) -> String {
    let mut s = String::new();
    for sym in syms {
        match *sym {
            Sym::Open => s.push('('),
            Sym::Close => s.push(')'),
            Sym::Num(i) | Sym::Op(i) => match &tokens[i].tok {
                Tok::Num(n) => write!(s, "{n}").unwrap(),
                Tok::Op(op) => s.push_str(op.symbol()),
                _ => unreachable!(),
            },
        }
    }
    s
}

/// Step 3: a parenthesis goes when its inner neighbour is the same kind and
/// the two partners are adjacent too. Every decision reads only neighbours.
pub fn drop_redundant(syms: &[Sym], partner: &[usize]) -> Vec<bool> {
    (0..syms.len())
        .map(|i| match syms[i] {
            Sym::Open => !(syms.get(i + 1) == Some(&Sym::Open) && partner[i + 1] + 1 == partner[i]),
            Sym::Close => !(i > 0 && syms[i - 1] == Sym::Close && partner[i - 1] == partner[i] + 1),
            _ => true,
        })
        .collect()
}

#[derive(Clone, Copy)]
enum Operand {
    Leaf(usize),
    Group(usize),
}

/// Top-level content of one parenthesised group.
struct Group {
    operands: Vec<Operand>,
    ops: Vec<usize>,
}

/// Steps 1 to 4: pads, matches, prunes and links operators into a binary
/// tree. Charges one round for each local step plus one per matching level.
pub fn simplify_expression(s: &str, cfg: &SimConfig) -> Result<ExprTree, ExprError> {
    let tokens = tokenize(s)?;
    if tokens.is_empty() {
        return Err(ExprError::parse(0, "empty expression"));
    }
    check_adjacency(&tokens, s.len())?;
    let syms = pad(&tokens);
    let padded = render(&syms, &tokens);

    let shape: String = syms
        .iter()
        .map(|x| match x {
            Sym::Open => '(',
            Sym::Close => ')',
            _ => '.',
        })
        .collect();
    let inner = SimConfig {
        n: syms.len().max(1),
        ..cfg.clone()
    };
    let m = match_parens(&shape, &inner).map_err(|e| {
        let pos = match syms[e.pos] {
            Sym::Num(i) | Sym::Op(i) => tokens[i].pos,
            _ => nearest_paren(&syms, &tokens, e.pos).unwrap_or(s.len()),
        };
        ExprError::parse(pos, "unbalanced parenthesis")
    })?;
    let partner: Vec<usize> = m.partner.iter().map(|p| p.unwrap_or(usize::MAX)).collect();

    let keep = drop_redundant(&syms, &partner);
    let kept: Vec<usize> = (0..syms.len()).filter(|&i| keep[i]).collect();
    let mut new_index = vec![usize::MAX; syms.len()];
    for (j, &i) in kept.iter().enumerate() {
        new_index[i] = j;
    }
    let simple_syms: Vec<Sym> = kept.iter().map(|&i| syms[i]).collect();
    let simple_partner: Vec<usize> = kept
        .iter()
        .map(|&i| match syms[i] {
            Sym::Open | Sym::Close => new_index[partner[i]],
            _ => usize::MAX,
        })
        .collect();
    let simple = render(&simple_syms, &tokens);

    let (tree, nodes) = link(&simple_syms, &simple_partner, &tokens)?;
    Ok(ExprTree {
        tree,
        nodes,
        padded,
        simple,
        match_levels: m.levels,
    })
}

fn nearest_paren(syms: &[Sym], tokens: &[Token], at: usize) -> Option<usize> {
    // padding parens have no source position; report the closest real token
    (0..syms.len())
        .map(|d| [at.checked_sub(d), Some(at + d)])
        .flat_map(|c| c.into_iter().flatten())
        .find_map(|i| match syms.get(i) {
            Some(Sym::Num(t) | Sym::Op(t)) => Some(tokens[*t].pos),
            _ => None,
        })
}

/// Step 4. Each group reads its top-level operands and operators by jumping
/// over nested groups with the partner pointers; the root is the last
/// operator, or the first for `**`.
fn link(
    syms: &[Sym],
    partner: &[usize],
    tokens: &[Token],
) -> Result<(Tree, Vec<OpNode>), ExprError> {
    let mut id = vec![usize::MAX; syms.len()];
    let mut nodes = Vec::new();
    for (i, s) in syms.iter().enumerate() {
        if let Sym::Num(t) | Sym::Op(t) = *s {
            id[i] = nodes.len();
            nodes.push(match &tokens[t].tok {
                Tok::Num(n) => OpNode::Num(n.clone()),
                Tok::Op(op) => OpNode::Op {
                    op: *op,
                    pos: tokens[t].pos,
                },
                _ => unreachable!(),
            });
        }
    }

    // group key: index of its '(' or usize::MAX for the implicit top group
    let scan = |from: usize, to: usize| -> Group {
        let mut g = Group {
            operands: Vec::new(),
            ops: Vec::new(),
        };
        let mut i = from;
        while i < to {
            match syms[i] {
                Sym::Open => {
                    g.operands.push(Operand::Group(i));
                    i = partner[i] + 1;
                    continue;
                }
                Sym::Num(_) => g.operands.push(Operand::Leaf(id[i])),
                Sym::Op(_) => g.ops.push(i),
                Sym::Close => unreachable!("closing parenthesis outside its group"),
            }
            i += 1;
        }
        g
    };
    let mut groups: Vec<(usize, Group)> = vec![(usize::MAX, scan(0, syms.len()))];
    for (i, s) in syms.iter().enumerate() {
        if *s == Sym::Open {
            groups.push((i, scan(i + 1, partner[i])));
        }
    }
    let mut slot_of = std::collections::HashMap::new();
    for (k, (open, _)) in groups.iter().enumerate() {
        slot_of.insert(*open, k);
    }

    let op_of = |i: usize| match syms[i] {
        Sym::Op(t) => match tokens[t].tok {
            Tok::Op(op) => op,
            _ => unreachable!(),
        },
        _ => unreachable!(),
    };
    for (_, g) in &groups {
        if g.operands.len() != g.ops.len() + 1 {
            let at = g.ops.first().map_or(0, |&i| id[i]);
            return Err(ExprError::parse(at, "malformed group"));
        }
        if let Some(&first) = g.ops.first() {
            let lv = op_of(first).level();
            if let Some(&bad) = g.ops.iter().find(|&&i| op_of(i).level() != lv) {
                let Sym::Op(t) = syms[bad] else {
                    unreachable!()
                };
                return Err(ExprError::parse(
                    tokens[t].pos,
                    "mixed precedence in a simple group",
                ));
            }
        }
    }

    // root of every group; a group holding one nested group is gone after step 3,
    // but follow the chain anyway
    let mut root = vec![usize::MAX; groups.len()];
    for k in 0..groups.len() {
        let mut cur = k;
        loop {
            let g = &groups[cur].1;
            if let Some(&first) = g.ops.first() {
                let pick = if op_of(first).right_assoc() {
                    first
                } else {
                    *g.ops.last().unwrap()
                };
                root[k] = id[pick];
                break;
            }
            match g.operands[0] {
                Operand::Leaf(v) => {
                    root[k] = v;
                    break;
                }
                Operand::Group(o) => cur = slot_of[&o],
            }
        }
    }
    let node_of = |o: Operand| match o {
        Operand::Leaf(v) => v,
        Operand::Group(open) => root[slot_of[&open]],
    };

    let n = nodes.len();
    let mut parent: Vec<Option<VertexId>> = vec![None; n];
    let mut kids: Vec<[usize; 2]> = vec![[usize::MAX; 2]; n];
    let mut attach = |child: usize, p: usize, side: usize, parent: &mut Vec<Option<VertexId>>| {
        parent[child] = Some(p);
        kids[p][side] = child;
    };
    for (_, g) in &groups {
        let Some(&first) = g.ops.first() else {
            continue;
        };
        let ops: Vec<usize> = g.ops.iter().map(|&i| id[i]).collect();
        let arg: Vec<usize> = g.operands.iter().map(|&o| node_of(o)).collect();
        let k = ops.len();
        if op_of(first).right_assoc() {
            // a0 ** (a1 ** (a2 ...))
            for t in 0..k {
                attach(arg[t], ops[t], 0, &mut parent);
                if t + 1 < k {
                    attach(ops[t + 1], ops[t], 1, &mut parent);
                }
            }
            attach(arg[k], ops[k - 1], 1, &mut parent);
        } else {
            // ((a0 o0 a1) o1 a2) ...
            attach(arg[0], ops[0], 0, &mut parent);
            for t in 0..k {
                if t > 0 {
                    attach(ops[t - 1], ops[t], 0, &mut parent);
                }
                attach(arg[t + 1], ops[t], 1, &mut parent);
            }
        }
    }
    let children: Vec<Vec<VertexId>> = kids
        .iter()
        .map(|k| k.iter().copied().filter(|&c| c != usize::MAX).collect())
        .collect();
    let tree = Tree::from_parts(parent, children)
        .map_err(|e| ExprError::parse(0, format!("operator linking failed: {e}")))?;
    Ok((tree, nodes))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SimConfig {
        SimConfig::new(64, 0.5)
    }

    #[test]
    fn one_plus_two() {
        let t = simplify_expression("1+2", &cfg()).unwrap();
        assert_eq!(t.padded, "((1))+((2))");
        assert_eq!(t.simple, "(1)+(2)");
        assert_eq!(t.sexpr(), "(+ 1 2)");
    }

    #[test]
    fn single_number() {
        let t = simplify_expression("3", &cfg()).unwrap();
        assert_eq!(t.tree.len(), 1);
        assert_eq!(t.sexpr(), "3");
    }

    #[test]
    fn worked_example() {
        let t = simplify_expression("2+5-(3+2\u{d7}6)-9", &cfg()).unwrap();
        assert_eq!(t.sexpr(), "(- (- (+ 2 5) (+ 3 (* 2 6))) 9)");
        assert_eq!(t.tree.len(), 11);
    }

    #[test]
    fn precedence_and_associativity() {
        let s = |e: &str| simplify_expression(e, &cfg()).unwrap().sexpr();
        assert_eq!(s("8-3-2"), "(- (- 8 3) 2)");
        assert_eq!(s("8/4/2"), "(/ (/ 8 4) 2)");
        assert_eq!(s("2**3**2"), "(** 2 (** 3 2))");
        assert_eq!(s("1+2*3**2"), "(+ 1 (* 2 (** 3 2)))");
        assert_eq!(s("(1+2)*3"), "(* (+ 1 2) 3)");
        assert_eq!(s("((((7))))"), "7");
        assert_eq!(s("(2*3)**2"), "(** (* 2 3) 2)");
    }

    #[test]
    fn malformed() {
        let err = |e: &str| match simplify_expression(e, &cfg()) {
            Err(ExprError::Parse { pos, .. }) => pos,
            other => panic!("{e}: {other:?}"),
        };
        assert_eq!(err("1+"), 2);
        assert!(err("(1+2") <= 1);
        assert_eq!(err(""), 0);
        let _ = err("1+2)");
    }
}
