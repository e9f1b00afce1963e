use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::ExprError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl Op {
    /// Binding strength: `**` over `* /` over `+ -`.
    pub fn level(self) -> u8 {
        match self {
            Op::Add | Op::Sub => 0,
            Op::Mul | Op::Div => 1,
            Op::Pow => 2,
        }
    }

    pub fn right_assoc(self) -> bool {
        self == Op::Pow
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Op::Add => "+",
            Op::Sub => "-",
            Op::Mul => "*",
            Op::Div => "/",
            Op::Pow => "**",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Num(BigInt),
    Op(Op),
    Open,
    Close,
}

/// A token and the byte offset where it starts in the source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub pos: usize,
}

/// Splits the source into tokens. Accepts `×`, `÷` and `−` for `*`, `/`, `-`.
/// Digits of one number must be contiguous.
pub fn tokenize(s: &str) -> Result<Vec<Token>, ExprError> {
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                let mut n = BigInt::zero();
                while i < chars.len() {
                    let Some(d) = chars[i].1.to_digit(10) else {
                        break;
                    };
                    n = n * 10 + d;
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Num(n),
                    pos,
                });
                continue;
            }
            '+' => Tok::Op(Op::Add),
            '-' | '\u{2212}' => Tok::Op(Op::Sub),
            '*' if chars.get(i + 1).map(|c| c.1) == Some('*') => {
                i += 1;
                Tok::Op(Op::Pow)
            }
            '*' | '\u{d7}' => Tok::Op(Op::Mul),
            '/' | '\u{f7}' => Tok::Op(Op::Div),
            '(' => Tok::Open,
            ')' => Tok::Close,
            other => {
                return Err(ExprError::parse(
                    pos,
                    format!("unexpected character {other:?}"),
                ))
            }
        };
        out.push(Token { tok, pos });
        i += 1;
    }
    Ok(out)
}

/// Checks that operands and operators alternate; each check looks at one
/// pair of neighbours. Parenthesis balance is left to the matcher.
pub fn check_adjacency(tokens: &[Token], end: usize) -> Result<(), ExprError> {
    let operand_end = |t: &Tok| matches!(t, Tok::Num(_) | Tok::Close);
    let mut prev: Option<&Tok> = None;
    for t in tokens {
        let ok = match (&t.tok, prev) {
            (Tok::Num(_) | Tok::Open, None) => true,
            (Tok::Num(_) | Tok::Open, Some(p)) => matches!(p, Tok::Op(_) | Tok::Open),
            (Tok::Op(_) | Tok::Close, Some(p)) => operand_end(p),
            (Tok::Op(_) | Tok::Close, None) => false,
        };
        if !ok {
            return Err(ExprError::parse(
                t.pos,
                "expected number or '('".to_string(),
            ));
        }
        prev = Some(&t.tok);
    }
    match prev {
        Some(p) if operand_end(p) => Ok(()),
        _ => Err(ExprError::parse(end, "expected number or '('")),
    }
}
