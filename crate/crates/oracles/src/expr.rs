use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

pub const MAX_EXPONENT: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("division by zero at {pos}")]
    DivisionByZero { pos: usize },
    #[error("exponent at {pos} is not an integer in 0..={MAX_EXPONENT}")]
    BadExponent { pos: usize },
}

impl EvalError {
    pub fn is_arithmetic(&self) -> bool {
        !matches!(self, EvalError::Parse { .. })
    }
}

/// Recursive-descent evaluator with exact rationals.
/// Precedence: `**` (right-assoc) over `* /` over `+ -`.
pub fn eval_reference(s: &str) -> Result<BigRational, EvalError> {
    let chars: Vec<(usize, char)> = s
        .char_indices()
        .filter(|(_, c)| !c.is_whitespace())
        .collect();
    let mut p = Parser { chars, i: 0 };
    let v = p.expr()?;
    if p.i != p.chars.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser {
    chars: Vec<(usize, char)>,
    i: usize,
}

impl Parser {
    fn pos(&self) -> usize {
        self.chars.get(self.i).map_or(usize::MAX, |c| c.0)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).map(|c| c.1)
    }

    fn error(&self, msg: &str) -> EvalError {
        EvalError::Parse {
            pos: self.pos(),
            msg: msg.to_string(),
        }
    }

    fn peek_pow(&self) -> bool {
        self.peek() == Some('*') && self.chars.get(self.i + 1).map(|c| c.1) == Some('*')
    }

    fn expr(&mut self) -> Result<BigRational, EvalError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.i += 1;
                    acc += self.term()?;
                }
                Some('-') | Some('\u{2212}') => {
                    self.i += 1;
                    acc -= self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<BigRational, EvalError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') | Some('\u{d7}') if !self.peek_pow() => {
                    self.i += 1;
                    acc *= self.power()?;
                }
                Some('/') | Some('\u{f7}') => {
                    let pos = self.pos();
                    self.i += 1;
                    let d = self.power()?;
                    if d.is_zero() {
                        return Err(EvalError::DivisionByZero { pos });
                    }
                    acc /= d;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<BigRational, EvalError> {
        let base = self.atom()?;
        if self.peek_pow() {
            let pos = self.pos();
            self.i += 2;
            let e = self.power()?;
            return pow(&base, &e).ok_or(EvalError::BadExponent { pos });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<BigRational, EvalError> {
        match self.peek() {
            Some('(') => {
                self.i += 1;
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.i += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let mut n = BigInt::zero();
                let mut next = self.pos();
                while let Some(d) = self.peek().and_then(|c| c.to_digit(10)) {
                    if self.pos() != next {
                        break;
                    }
                    n = n * 10 + d;
                    self.i += 1;
                    next += 1;
                }
                Ok(BigRational::from_integer(n))
            }
            _ => Err(self.error("expected number or '('")),
        }
    }
}

/// `base ** e` for integer `e` in `0..=MAX_EXPONENT`.
pub fn pow(base: &BigRational, e: &BigRational) -> Option<BigRational> {
    if !e.is_integer() || e.is_negative() {
        return None;
    }
    let k = e.to_integer().to_u32()?;
    if k > MAX_EXPONENT {
        return None;
    }
    let mut out = BigRational::one();
    for _ in 0..k {
        out *= base;
    }
    Some(out)
}

/// Random well-formed expression of nesting depth at most `depth`.
/// Digits are `0..=9`; exponents are literals in `0..=3`.
pub fn random_expression<R: Rng>(r: &mut R, depth: usize) -> String {
    if depth == 0 || r.gen_bool(0.25) {
        return r.gen_range(0..10).to_string();
    }
    let lhs = random_expression(r, depth - 1);
    let s = match r.gen_range(0..9) {
        0 | 1 => format!("{lhs}+{}", random_expression(r, depth - 1)),
        2 | 3 => format!("{lhs}-{}", random_expression(r, depth - 1)),
        4 | 5 => format!("{lhs}*{}", random_expression(r, depth - 1)),
        6 | 7 => format!("{lhs}/{}", random_expression(r, depth - 1)),
        _ => format!("({lhs})**{}", r.gen_range(0..4)),
    };
    if r.gen_bool(0.4) {
        format!("({s})")
    } else {
        s
    }
}
